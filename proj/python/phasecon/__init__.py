"""Particle transport on curved spacetimes with electromagnetic fields."""

from ._phasecon import (
    CSV_COLUMNS,
    IncompatibleChecker,
    InvalidParticle,
    Metric,
    OutsideDomain,
    ParseError,
    PhaseconError,
    Potential,
    Report,
    Scenario,
    ValidationError,
    bianchi_residual,
    builtin_scenario_text,
    builtin_scenarios,
    check,
    christoffel,
    closure_residual,
    einstein,
    faraday,
    load_scenario,
    load_scenario_file,
    resolve_scenario,
    ricci,
    riemann,
    run,
)

__all__ = [name for name in dir() if not name.startswith("_")]
