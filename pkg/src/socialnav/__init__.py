"""Two-agent social navigation simulator: doorway and intersection scenarios,
barrier-certified velocity filtering, leader/follower conflict resolution, and
priority negotiation by dialogue."""

from .runner import Backend, Method, RunConfig, run_one, run_suite, simulate
from .scenarios import Asymmetry, ScenarioKind, ScenarioSpec, enumerate_suite
from .world import AgentParams, AgentState, ControlInput, PriorityType, Vec2

__all__ = [
    "AgentParams", "AgentState", "Asymmetry", "Backend", "ControlInput",
    "Method", "PriorityType", "RunConfig", "ScenarioKind", "ScenarioSpec",
    "Vec2", "enumerate_suite", "run_one", "run_suite", "simulate",
]

__version__ = "0.1.0"
