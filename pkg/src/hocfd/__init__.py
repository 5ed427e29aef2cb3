"""High-order compact finite differences for parabolic PDEs with mixed derivatives."""

__version__ = "0.1.0"
