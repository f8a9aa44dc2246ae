"""Explicit Kummer varieties of genus-3 hyperelliptic Jacobians with a rational Weierstrass point."""

__version__ = "0.1.0"
