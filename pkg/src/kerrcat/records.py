"""Sweep-record plumbing shared by the dynamics module and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import ModelParams

__all__ = ["SweepRecord"]


@dataclass(frozen=True)
class SweepRecord:
    """One computed grid point with full parameter provenance.

    `coords` are the sweep coordinates (ordered name/value pairs, e.g.
    (("delta", ...), ("t", ...))), `values` the computed outputs, and
    `label` an optional series tag (e.g. the initial-state name).
    """

    params: ModelParams
    coords: tuple[tuple[str, float], ...]
    values: tuple[tuple[str, float], ...]
    label: str = ""
    status: str = "ok"

    def coord(self, name: str) -> float:
        for key, val in self.coords:
            if key == name:
                return val
        raise KeyError(name)

    def value(self, name: str) -> float:
        for key, val in self.values:
            if key == name:
                return val
        raise KeyError(name)
