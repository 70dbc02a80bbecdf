"""binbench - online bin packing policies, offline oracles and regret experiments."""

__version__ = "0.3.0"
