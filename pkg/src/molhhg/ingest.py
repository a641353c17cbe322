"""Molecule ingestion: GAMESS punch-file subset ($DATA + $VEC) and the native
JSON format (bohr-only, schema-validated, losslessly round-trippable).

Only the $DATA and $VEC groups of a punch file are read; any other group is
skipped with a logged warning.  $DATA coordinates default to angstrom (the
GAMESS convention) unless the file carries a UNITS=BOHR flag, and are
converted to bohr at ingestion.  L shells are expanded into s + p, and every
Cartesian component becomes its own contracted shell, renormalized to unit
self-overlap (MO coefficients are assumed to multiply normalized contracted
shells; orbitals whose norm strays from 1 by more than 1% are flagged).
"""

from __future__ import annotations

import json
import logging
import math
import re
from dataclasses import dataclass

import numpy as np
import jsonschema

from . import constants
from .molecule import (
    AtomicCenter,
    ContractedShell,
    GaussianPrimitive,
    MolecularOrbital,
    Molecule,
    orbital_norm,
)

log = logging.getLogger(__name__)

NATIVE_FORMAT_NAME = "molhhg-molecule"
NATIVE_FORMAT_VERSION = 1

PUNCH_EXTENSIONS = {".pun", ".punch", ".dat"}
NATIVE_EXTENSIONS = {".json"}

_VEC_FIELD_WIDTH = 15
_VEC_FIELDS_PER_LINE = 5

# GAMESS Cartesian component ordering per shell type.
_SHELL_POWERS = {
    "S": [(0, 0, 0)],
    "P": [(1, 0, 0), (0, 1, 0), (0, 0, 1)],
    "D": [(2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 0), (1, 0, 1), (0, 1, 1)],
    "L": [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)],
}


class IngestError(ValueError):
    """Base class for all structured ingestion failures."""


class PunchParseError(IngestError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.column = column


class PunchStructureError(IngestError):
    pass


class NativeValidationError(IngestError):
    def __init__(self, violations: list[str]):
        super().__init__(
            "native molecule file is invalid:\n  - " + "\n  - ".join(violations)
        )
        self.violations = violations


@dataclass(frozen=True)
class PunchDocument:
    """Raw $DATA and $VEC group bodies plus provenance for error messages."""

    data_group: str
    vec_group: str
    source: str = "<memory>"
    data_line_offset: int = 0
    vec_line_offset: int = 0
    units: str = "angstrom"


def _as_text(raw: str | bytes) -> str:
    if isinstance(raw, bytes):
        return raw.decode("utf-8", errors="replace")
    return raw


def split_punch(raw: str | bytes, source: str = "<memory>") -> PunchDocument:
    """Locate the $DATA and $VEC groups; every group must end with $END."""
    text = _as_text(raw)
    lines = text.splitlines()
    groups: dict[str, tuple[int, list[str]]] = {}
    current: str | None = None
    start = 0
    body: list[str] = []

    def close(name: str, content: list[str]) -> None:
        if name in ("DATA", "VEC") and name in groups:
            raise PunchStructureError(f"duplicate ${name} group in {source}")
        groups.setdefault(name, (start, content))

    for n, line in enumerate(lines):
        token = line.strip().upper()
        if current is None:
            m = re.match(r"\$(\w+)", token)
            if m:
                current = m.group(1)
                start = n + 1
                body = []
                # single-line groups: " $CONTRL ... $END"
                remainder = line.strip()[m.end() :]
                end = re.search(r"\$END\b", remainder, re.IGNORECASE)
                if end:
                    close(current, [remainder[: end.start()]])
                    current = None
        else:
            if token == "$END":
                close(current, body)
                current = None
            elif token.startswith("$"):
                raise PunchStructureError(
                    f"unterminated ${current} group in {source} "
                    f"(found {token.split()[0]} before $END)"
                )
            else:
                body.append(line)
    if current is not None:
        raise PunchStructureError(
            f"unterminated ${current} group (missing $END) in {source}"
        )
    for required in ("DATA", "VEC"):
        if required not in groups:
            raise PunchStructureError(f"missing ${required} group in {source}")
        if not "".join(groups[required][1]).strip():
            raise PunchStructureError(f"empty ${required} group in {source}")
    skipped = sorted(set(groups) - {"DATA", "VEC"})
    if skipped:
        log.warning("skipping unsupported punch groups: %s", ", ".join(f"${g}" for g in skipped))
    units = "bohr" if re.search(r"UNITS\s*=\s*BOHR", text, re.IGNORECASE) else "angstrom"
    return PunchDocument(
        data_group="\n".join(groups["DATA"][1]),
        vec_group="\n".join(groups["VEC"][1]),
        source=source,
        data_line_offset=groups["DATA"][0],
        vec_line_offset=groups["VEC"][0],
        units=units,
    )


def _parse_float(token: str, line_no: int, column: int | None = None) -> float:
    try:
        value = float(token.replace("D", "E").replace("d", "e"))
    except ValueError:
        raise PunchParseError(f"cannot parse {token.strip()!r} as a number", line_no, column)
    if not math.isfinite(value):
        raise PunchParseError(f"non-finite value {token.strip()!r}", line_no, column)
    return value


def _parse_data_group(doc: PunchDocument) -> tuple[str, list[AtomicCenter]]:
    lines = doc.data_group.splitlines()
    off = doc.data_line_offset + 1  # 1-based line numbers in the source file
    if len(lines) < 2:
        raise PunchStructureError("$DATA group too short (need title and symmetry lines)")
    title = lines[0].strip()
    symmetry = lines[1].split()[0].upper() if lines[1].split() else ""
    if symmetry != "C1":
        raise PunchStructureError(
            f"only C1-symmetry $DATA groups are supported, got {symmetry!r}"
        )
    scale = 1.0 if doc.units == "bohr" else constants.BOHR_PER_ANGSTROM

    centers: list[AtomicCenter] = []
    i = 2
    n = len(lines)
    while i < n:
        if not lines[i].strip():
            i += 1
            continue
        parts = lines[i].split()
        if len(parts) < 5:
            raise PunchParseError(
                f"expected atom line 'LABEL CHARGE X Y Z', got {lines[i].strip()!r}",
                off + i,
            )
        element = parts[0]
        _parse_float(parts[1], off + i)  # nuclear charge, unused
        pos = np.array([_parse_float(p, off + i) for p in parts[2:5]]) * scale
        i += 1

        shells: list[ContractedShell] = []
        while i < n and lines[i].strip():
            header = lines[i].split()
            shell_type = header[0].upper()
            if shell_type not in _SHELL_POWERS:
                raise PunchParseError(
                    f"unsupported shell type {shell_type!r} (supported: "
                    f"{', '.join(sorted(_SHELL_POWERS))})",
                    off + i,
                )
            if len(header) < 2:
                raise PunchParseError("shell header needs a primitive count", off + i)
            try:
                nprim = int(header[1])
            except ValueError:
                raise PunchParseError(
                    f"bad primitive count {header[1]!r}", off + i
                ) from None
            if nprim < 1:
                raise PunchParseError("primitive count must be positive", off + i)
            i += 1
            rows = []
            for k in range(nprim):
                if i >= n or not lines[i].strip():
                    raise PunchParseError(
                        f"shell promised {nprim} primitives but the block ended", off + i
                    )
                fields = lines[i].split()
                needed = 4 if shell_type == "L" else 3
                if len(fields) < needed:
                    raise PunchParseError(
                        f"primitive row needs {needed} fields, got {len(fields)}", off + i
                    )
                rows.append([_parse_float(f, off + i) for f in fields[1:needed]])
                i += 1
            exps = [r[0] for r in rows]
            for e in exps:
                if e <= 0:
                    raise PunchParseError(f"exponent must be positive, got {e}", off + i - 1)
            if shell_type == "L":
                coeff_sets = [[r[1] for r in rows], [r[2] for r in rows]]
                power_sets = [_SHELL_POWERS["S"], _SHELL_POWERS["P"]]
            else:
                coeff_sets = [[r[1] for r in rows]]
                power_sets = [_SHELL_POWERS[shell_type]]
            for coeffs, powers_list in zip(coeff_sets, power_sets):
                prims = tuple(GaussianPrimitive(e, c) for e, c in zip(exps, coeffs))
                for powers in powers_list:
                    shells.append(ContractedShell(powers, prims).normalized())
        if not shells:
            raise PunchStructureError(f"atom {element!r} has no basis shells")
        centers.append(AtomicCenter(pos, element, tuple(shells)))
    if not centers:
        raise PunchStructureError("$DATA group contains no atoms")
    return title, centers


def _parse_vec_group(doc: PunchDocument, nbasis: int) -> list[np.ndarray]:
    lines = doc.vec_group.splitlines()
    off = doc.vec_line_offset + 1
    coeffs: list[float] = []
    for n, line in enumerate(lines):
        if not line.strip():
            continue
        if len(line) < 5 + _VEC_FIELD_WIDTH:
            raise PunchParseError(
                "short $VEC line (need a 2-char orbital index, 3-char line index "
                "and at least one 15-char field)",
                off + n,
            )
        for idx_slice, what in ((slice(0, 2), "orbital index"), (slice(2, 5), "line index")):
            token = line[idx_slice]
            if not token.strip().isdigit():
                raise PunchParseError(
                    f"malformed {what} {token!r}", off + n, idx_slice.start + 1
                )
        payload = line[5:]
        if len(payload) > _VEC_FIELDS_PER_LINE * _VEC_FIELD_WIDTH and payload[
            _VEC_FIELDS_PER_LINE * _VEC_FIELD_WIDTH :
        ].strip():
            raise PunchParseError(
                f"more than {_VEC_FIELDS_PER_LINE} fields on a $VEC line", off + n
            )
        for k in range(_VEC_FIELDS_PER_LINE):
            token = payload[k * _VEC_FIELD_WIDTH : (k + 1) * _VEC_FIELD_WIDTH]
            if not token.strip():
                break
            if len(token) != _VEC_FIELD_WIDTH:
                raise PunchParseError(
                    "truncated fixed-width field", off + n, 5 + k * _VEC_FIELD_WIDTH + 1
                )
            coeffs.append(_parse_float(token, off + n, 5 + k * _VEC_FIELD_WIDTH + 1))
    if not coeffs:
        raise PunchStructureError("$VEC group contains no coefficients")
    if len(coeffs) % nbasis != 0:
        raise PunchStructureError(
            f"$VEC holds {len(coeffs)} coefficients, not a multiple of the "
            f"basis dimension {nbasis} implied by $DATA"
        )
    vectors = np.array(coeffs).reshape(-1, nbasis)
    return [vectors[i] for i in range(vectors.shape[0])]


def parse_punch(
    document: PunchDocument,
    *,
    ionization_potentials=None,
    orbital_labels: list[str] | None = None,
    static_dipole_debye=(0.0, 0.0, 0.0),
    check_norms: bool = True,
) -> Molecule:
    """Build a Molecule from a punch document.

    Punch files carry no ionization potentials; pass them here (one value per
    orbital, or a single value for all).  Without an override a placeholder of
    0.5 hartree is used and a warning is logged -- fine for parser testing,
    not for physics.
    """
    title, centers = _parse_data_group(document)
    nbasis = sum(len(c.shells) for c in centers)
    vectors = _parse_vec_group(document, nbasis)

    n_orb = len(vectors)
    if ionization_potentials is None:
        log.warning(
            "punch file provides no ionization potentials; using the 0.5 hartree "
            "placeholder (override via ionization_potentials=)"
        )
        ips = [0.5] * n_orb
    elif np.isscalar(ionization_potentials):
        ips = [float(ionization_potentials)] * n_orb
    else:
        ips = [float(v) for v in ionization_potentials]
        if len(ips) != n_orb:
            raise PunchStructureError(
                f"{len(ips)} ionization potentials supplied for {n_orb} orbitals"
            )
    labels = orbital_labels or [f"MO{i + 1}" for i in range(n_orb)]
    if len(labels) != n_orb:
        raise PunchStructureError(f"{len(labels)} labels supplied for {n_orb} orbitals")

    orbitals = tuple(
        MolecularOrbital(vec, ip, label)
        for vec, ip, label in zip(vectors, ips, labels)
    )
    molecule = Molecule(tuple(centers), orbitals, np.asarray(static_dipole_debye, float), title)
    if check_norms:
        _flag_norms(molecule)
    return molecule


def _flag_norms(molecule: Molecule) -> None:
    for i, orb in enumerate(molecule.orbitals):
        norm = orbital_norm(molecule, i)
        if abs(norm - 1.0) > 0.01:
            log.warning(
                "orbital %s has norm %.4f (deviates from 1 by more than 1%%); "
                "coefficients may not refer to normalized contracted shells",
                orb.label,
                norm,
            )


# --------------------------------------------------------------------------
# Native JSON format
# --------------------------------------------------------------------------

NATIVE_SCHEMA = {
    "type": "object",
    "required": ["format", "version", "units", "centers", "orbitals"],
    "additionalProperties": False,
    "properties": {
        "format": {"const": NATIVE_FORMAT_NAME},
        "version": {"const": NATIVE_FORMAT_VERSION},
        "name": {"type": "string"},
        "units": {"const": "bohr"},
        "centers": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["element", "position", "shells"],
                "additionalProperties": False,
                "properties": {
                    "element": {"type": "string"},
                    "position": {
                        "type": "array",
                        "minItems": 3,
                        "maxItems": 3,
                        "items": {"type": "number"},
                    },
                    "shells": {
                        "type": "array",
                        "minItems": 1,
                        "items": {
                            "type": "object",
                            "required": ["powers", "primitives"],
                            "additionalProperties": False,
                            "properties": {
                                "powers": {
                                    "type": "array",
                                    "minItems": 3,
                                    "maxItems": 3,
                                    "items": {"type": "integer", "minimum": 0},
                                },
                                "normalization": {"type": "number", "exclusiveMinimum": 0},
                                "primitives": {
                                    "type": "array",
                                    "minItems": 1,
                                    "items": {
                                        "type": "object",
                                        "required": ["exponent", "coefficient"],
                                        "additionalProperties": False,
                                        "properties": {
                                            "exponent": {
                                                "type": "number",
                                                "exclusiveMinimum": 0,
                                            },
                                            "coefficient": {"type": "number"},
                                        },
                                    },
                                },
                            },
                        },
                    },
                },
            },
        },
        "orbitals": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["label", "ionization_potential", "coefficients"],
                "additionalProperties": False,
                "properties": {
                    "label": {"type": "string"},
                    "ionization_potential": {"type": "number", "exclusiveMinimum": 0},
                    "degeneracy": {"type": "integer", "minimum": 1},
                    "coefficients": {"type": "array", "items": {"type": "number"}},
                },
            },
        },
        "static_dipole_debye": {
            "type": "array",
            "minItems": 3,
            "maxItems": 3,
            "items": {"type": "number"},
        },
    },
}


def _reject_constant(name: str):
    raise NativeValidationError([f"non-finite JSON constant {name!r} is not allowed"])


def parse_native(raw: str | bytes, *, check_norms: bool = True) -> Molecule:
    """Parse the native JSON molecule format, reporting every schema violation."""
    text = _as_text(raw)
    try:
        payload = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise NativeValidationError([f"not valid JSON: {exc}"]) from None

    validator = jsonschema.Draft202012Validator(NATIVE_SCHEMA)
    violations = [
        f"{'/'.join(str(p) for p in err.absolute_path) or '<root>'}: {err.message}"
        for err in sorted(validator.iter_errors(payload), key=lambda e: list(e.absolute_path))
    ]
    if violations:
        raise NativeValidationError(violations)

    centers = []
    for c in payload["centers"]:
        shells = tuple(
            ContractedShell(
                tuple(s["powers"]),
                tuple(
                    GaussianPrimitive(p["exponent"], p["coefficient"])
                    for p in s["primitives"]
                ),
                s.get("normalization", 1.0),
            )
            for s in c["shells"]
        )
        centers.append(AtomicCenter(np.array(c["position"]), c["element"], shells))

    nshell = sum(len(c.shells) for c in centers)
    problems = []
    orbitals = []
    for k, o in enumerate(payload["orbitals"]):
        if len(o["coefficients"]) != nshell:
            problems.append(
                f"orbitals/{k}: {len(o['coefficients'])} coefficients for {nshell} shells"
            )
            continue
        orbitals.append(
            MolecularOrbital(
                np.array(o["coefficients"]),
                o["ionization_potential"],
                o["label"],
                o.get("degeneracy", 1),
            )
        )
    if problems:
        raise NativeValidationError(problems)

    molecule = Molecule(
        tuple(centers),
        tuple(orbitals),
        np.asarray(payload.get("static_dipole_debye", (0.0, 0.0, 0.0)), float),
        payload.get("name", ""),
    )
    if check_norms:
        _flag_norms(molecule)
    return molecule


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return f"{x:.17g}"
    if isinstance(x, str):
        return json.dumps(x)
    raise TypeError(f"cannot format {type(x)}")


def _emit(obj, indent: int, out: list[str]) -> None:
    pad = "  " * indent
    if isinstance(obj, dict):
        out.append("{\n")
        for i, (key, value) in enumerate(obj.items()):
            out.append(f"{pad}  {json.dumps(key)}: ")
            _emit(value, indent + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            out.append("[" + ", ".join(_fmt(v) for v in obj) + "]")
        else:
            out.append("[\n")
            for i, value in enumerate(obj):
                out.append(pad + "  ")
                _emit(value, indent + 1, out)
                out.append(",\n" if i < len(obj) - 1 else "\n")
            out.append(pad + "]")
    else:
        out.append(_fmt(obj))


def write_native(molecule: Molecule) -> str:
    """Serialize to the native format: stable ordering, 17 significant digits."""
    doc = {
        "format": NATIVE_FORMAT_NAME,
        "version": NATIVE_FORMAT_VERSION,
        "name": molecule.name,
        "units": "bohr",
        "centers": [
            {
                "element": c.element,
                "position": [float(v) for v in c.position],
                "shells": [
                    {
                        "powers": list(s.powers),
                        "normalization": float(s.normalization),
                        "primitives": [
                            {"exponent": float(p.exponent), "coefficient": float(p.coefficient)}
                            for p in s.primitives
                        ],
                    }
                    for s in c.shells
                ],
            }
            for c in molecule.centers
        ],
        "orbitals": [
            {
                "label": o.label,
                "ionization_potential": float(o.ionization_potential),
                "degeneracy": int(o.degeneracy),
                "coefficients": [float(v) for v in o.coefficients],
            }
            for o in molecule.orbitals
        ],
        "static_dipole_debye": [float(v) for v in molecule.static_dipole_debye],
    }
    out: list[str] = []
    _emit(doc, 0, out)
    out.append("\n")
    return "".join(out)


def load_molecule(path, **kwargs) -> Molecule:
    """Read a molecule file, picking the parser from the file extension."""
    from pathlib import Path

    p = Path(path)
    suffix = p.suffix.lower()
    raw = p.read_bytes()
    if suffix in NATIVE_EXTENSIONS:
        return parse_native(raw, **{k: v for k, v in kwargs.items() if k == "check_norms"})
    if suffix in PUNCH_EXTENSIONS:
        return parse_punch(split_punch(raw, source=str(p)), **kwargs)
    raise IngestError(
        f"cannot infer format from extension {suffix!r} "
        f"(native: {sorted(NATIVE_EXTENSIONS)}, punch: {sorted(PUNCH_EXTENSIONS)})"
    )
