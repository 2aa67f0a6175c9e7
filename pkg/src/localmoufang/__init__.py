"""Local Moufang sets: construction, verification and reconstruction over finite local rings."""

__version__ = "0.1.0"
