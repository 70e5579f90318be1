"""Decision procedures and witness synthesis for equational domains among finite semigroups."""
__version__ = "0.1.0"
__name__ = "edsem"
