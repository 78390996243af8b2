# Copyright 2026 The awe-takeoff Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Tethered take-off, climb and figure-of-eight simulator."""

import csv
import io

from ._core import (
    AweError,
    NonFiniteCost,
    ParseError,
    UnstableRequest,
    ValidationError,
    ZeroGain,
    closed_loop_eigenvalues,
    gains,
    identify,
    nominal_scenario_text,
    normalize_scenario,
    scenario_keys,
    synthetic_dataset,
)
from . import _core

__all__ = [
    "AweError",
    "NonFiniteCost",
    "ParseError",
    "UnstableRequest",
    "ValidationError",
    "ZeroGain",
    "closed_loop_eigenvalues",
    "gains",
    "identify",
    "nominal_scenario_text",
    "normalize_scenario",
    "scenario_keys",
    "scenario_text",
    "simulate",
    "synthetic_dataset",
]


def _format(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return ",".join(repr(float(v)) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def scenario_text(base=None, **overrides):
    """Scenario text from a base (default: paper-nominal) plus key overrides.

    Override keys use double underscores for the section dot, e.g.
    ``sim__duration=30`` sets ``sim.duration``.
    """
    text = nominal_scenario_text() if base is None else normalize_scenario(base)
    if not overrides:
        return text
    wanted = {k.replace("__", "."): _format(v) for k, v in overrides.items()}
    lines = []
    for line in text.splitlines():
        key = line.split("=", 1)[0].strip()
        if key in wanted:
            line = f"{key} = {wanted.pop(key)}"
        lines.append(line)
    lines.extend(f"{k} = {v}" for k, v in wanted.items())
    return normalize_scenario("\n".join(lines) + "\n")


def _number(text):
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def simulate(scenario=None, **overrides):
    """Runs a scenario and returns (metrics, telemetry).

    ``metrics`` maps metric names to values, ``telemetry`` maps column names
    to lists (floats, or strings for mode and safety).
    """
    result = _core.simulate(scenario_text(scenario, **overrides))
    metrics = {k: _number(v) for k, v in result["metrics"].items()}
    lines = (line for line in io.StringIO(result["telemetry_csv"]) if not line.startswith("#"))
    reader = csv.reader(lines)
    header = next(reader)
    columns = {name: [] for name in header}
    for row in reader:
        for name, cell in zip(header, row):
            columns[name].append(_number(cell))
    return metrics, columns
