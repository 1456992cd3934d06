"""Python access to obstower: the same spec/report documents as the CLI."""

import json

from . import _core

__version__ = _core.version
witt_rank = _core.witt_rank
hall_basis = _core.hall_basis
modular_h1 = _core.modular_h1
ls_weights = _core.ls_weights


class ObstowerError(Exception):
    """Raised for a rejected spec (exit_code 2) or an exceeded budget (exit_code 3)."""

    def __init__(self, error):
        self.code = error["code"]
        self.exit_code = error["exit_code"]
        self.message = error["message"]
        super().__init__(f"{self.code}: {self.message}")


def _raise(exc):
    raise ObstowerError(json.loads(str(exc))["error"]) from None


def run(command, spec, *, budget_profile="", jobs=1, **budgets):
    """Run a command on a spec dict and return the report dict."""
    try:
        out = _core.run_json(command, json.dumps(spec), budget_profile, budgets, jobs)
    except _core._AppFailure as exc:
        _raise(exc)
    return json.loads(out)


def group_cohomology(group, factors, n):
    """Invariant factors of H^n(group, A) for A = prod Z/f with trivial action."""
    try:
        return _core.group_cohomology(group, list(factors), n)
    except _core._AppFailure as exc:
        _raise(exc)


__all__ = ["ObstowerError", "run", "group_cohomology", "witt_rank", "hall_basis", "modular_h1", "ls_weights"]
