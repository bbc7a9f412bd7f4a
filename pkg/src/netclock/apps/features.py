"""Temporal prefix features for cascade-size prediction.

Features of a cascade's first m activations, computed on clock-remapped
times: how long the prefix took and how its inter-activation gaps look.
The label marks whether the cascade grew past alpha*m activations; the
classifier itself is out of scope, the output is a feature table.
"""
from __future__ import annotations

import csv
import statistics
from dataclasses import dataclass

from ..cascades import CascadeSet
from ..clock import Clock

FEATURE_NAMES = (
    "time_to_mth",
    "mean_gap",
    "median_gap",
    "max_gap",
    "distinct_steps",
)


@dataclass(frozen=True)
class SizeFeatureRow:
    cascade_id: int
    m: int
    time_to_mth: int
    mean_gap: float
    median_gap: float
    max_gap: int
    distinct_steps: int
    label: bool  # True when the cascade reached size >= alpha * m


def extract_size_features(
    cs: CascadeSet, clock: Clock, m: int, alpha: float = 1.5
) -> list[SizeFeatureRow]:
    """One feature row per cascade with at least m activations."""
    if m < 2:
        raise ValueError(f"prefix length must be >= 2, got {m}")
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    rows = []
    for cascade in cs.cascades:
        if cascade.size < m:
            continue
        steps = [clock.remap_time(a.time) for a in cascade.activations[:m]]
        gaps = [b - a for a, b in zip(steps, steps[1:])]
        rows.append(
            SizeFeatureRow(
                cascade_id=cascade.id,
                m=m,
                time_to_mth=steps[-1] - steps[0],
                mean_gap=sum(gaps) / len(gaps),
                median_gap=statistics.median(gaps),
                max_gap=max(gaps),
                distinct_steps=len(set(steps)),
                label=cascade.size >= alpha * m,
            )
        )
    return rows


def write_feature_csv(rows: list[SizeFeatureRow], path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("cascade_id", "m") + FEATURE_NAMES + ("label",))
        for r in rows:
            writer.writerow(
                (
                    r.cascade_id,
                    r.m,
                    r.time_to_mth,
                    f"{r.mean_gap:.6g}",
                    f"{r.median_gap:.6g}",
                    r.max_gap,
                    r.distinct_steps,
                    int(r.label),
                )
            )
