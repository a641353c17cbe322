"""molhhg: multi-center strong-field simulator for molecular harmonic spectra."""

__version__ = "0.1.0"
