"""blockcalc - block-creation design calculator and transaction-conflict simulator."""

__version__ = "0.1.0"
