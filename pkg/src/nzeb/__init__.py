"""Techno-economic model of net-zero energy homes with PV, batteries and V2H."""

__version__ = "0.1.0"
