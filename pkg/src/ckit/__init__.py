"""ckit: exact computations with level-zero crystals of quantum affine algebras."""

__version__ = "0.1.0"
