"""Agricultural tax-regime, minimum tax liability and land-market welfare
scenarios for Ukraine."""

__version__ = "0.1.0"
