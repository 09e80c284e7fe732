"""Frozen verification constants, loaded from the packaged calibration file.

The quadratic bounds this package verifies hold with unspecified constants,
so the campaign suite checks against values frozen after an initial
calibration run. calibration.json carries the frozen values together with
provenance notes (seed, corpus, observed statistics). Tests and the CLI read
them from here instead of hard-coding; changing a frozen constant means
editing that file deliberately.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources


@dataclass(frozen=True)
class Calibration:
    line_count_c_max: Fraction
    quadratic_band: tuple[Fraction, Fraction]
    quadratic_band_object: str
    pn_convergence_tolerance_q: Fraction
    pn_convergence_tolerance_qi: Fraction
    pn_convergence_bounds_q: tuple[int, int]
    pn_convergence_bounds_qi: tuple[int, int]
    raw: dict


def load_calibration() -> Calibration:
    text = resources.files("ruledcount").joinpath("calibration.json").read_text()
    data = json.loads(text)
    conv = data["pn_convergence"]
    return Calibration(
        line_count_c_max=Fraction(data["line_count_bound"]["c_max"]),
        quadratic_band=(
            Fraction(data["quadratic_band"]["lo"]),
            Fraction(data["quadratic_band"]["hi"]),
        ),
        quadratic_band_object=data["quadratic_band"]["object"],
        pn_convergence_tolerance_q=Fraction(conv["q"]["max_rel_change"]),
        pn_convergence_tolerance_qi=Fraction(conv["qi"]["max_rel_change"]),
        pn_convergence_bounds_q=tuple(conv["q"]["bounds"]),
        pn_convergence_bounds_qi=tuple(conv["qi"]["bounds"]),
        raw=data,
    )
