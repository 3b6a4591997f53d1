"""services module for xychain"""

from . import chain_model, ed_oracle, free_fermion_dynamics, observables, sweep_service, wick_engine

__all__ = [
    "chain_model",
    "ed_oracle",
    "free_fermion_dynamics",
    "observables",
    "sweep_service",
    "wick_engine",
]
