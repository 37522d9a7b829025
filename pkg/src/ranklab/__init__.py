"""ranklab: h-scattered subspaces over finite fields and MRD rank-metric
codes, with every construction cross-validated by brute-force enumeration."""

__version__ = "0.1.0"
