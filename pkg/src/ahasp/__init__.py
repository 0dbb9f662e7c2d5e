"""Deadlock-free scheduling of attachable carrier/shuttle AGV fleets."""
from .alns import AlnsConfig, AlnsResult, initial_solution, solve
from .baselines import BruteForceLimits, OracleResult, brute_force, eddbid
from .chain import DualChain, Side, Slot, insert_task, remove_task
from .deadlock import InfeasibleSlots, brs, is_feasible
from .decode import INFEASIBLE, Schedule, TaskTiming, evaluate, fdd
from .errors import (
    AhaspError,
    ConfigError,
    ContractError,
    FormatError,
    InstanceError,
    PairingError,
    RepresentationError,
    SizeLimitError,
)
from .generate import GenSpec, generate
from .model import Fleet, Instance, TaskSpec, TimingParams, travel_time, validate_instance
from .petri import SolutionNet, build_net

__all__ = [
    "AhaspError",
    "AlnsConfig",
    "AlnsResult",
    "BruteForceLimits",
    "ConfigError",
    "ContractError",
    "DualChain",
    "Fleet",
    "FormatError",
    "GenSpec",
    "INFEASIBLE",
    "InfeasibleSlots",
    "Instance",
    "InstanceError",
    "OracleResult",
    "PairingError",
    "RepresentationError",
    "Schedule",
    "Side",
    "SizeLimitError",
    "Slot",
    "SolutionNet",
    "TaskSpec",
    "TaskTiming",
    "TimingParams",
    "brs",
    "brute_force",
    "build_net",
    "eddbid",
    "evaluate",
    "fdd",
    "generate",
    "initial_solution",
    "insert_task",
    "is_feasible",
    "remove_task",
    "solve",
    "travel_time",
    "validate_instance",
]
