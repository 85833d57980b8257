"""Desk-scale O-RAN resource-allocation xApp: RAN simulator, actor-critic trainers, E2-style bus."""

__version__ = "0.1.0"
