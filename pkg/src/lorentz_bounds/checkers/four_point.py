"""Four-point comparison (tau form and angle form), future and past tuples.

Past tuples are handled by running the future code on transposed relations;
comparison values are invariant under the time reflection, so both senses
share four_point_batch.
"""
from __future__ import annotations

from enum import Enum

import numpy as np

from .. import model_space as ms
from ..comparison import angle_interval, four_point_batch
from ..finite_space import FiniteLorentzSpace
from .report import Bound, CheckReport, Collector, Sense


class FourPointVariant(str, Enum):
    TIMELIKE = "TIMELIKE"
    CAUSAL = "CAUSAL"
    STRICT = "STRICT"


_SENSES = {FourPointVariant.TIMELIKE: Sense.FOUR_POINT_TIMELIKE,
           FourPointVariant.CAUSAL: Sense.FOUR_POINT_CAUSAL,
           FourPointVariant.STRICT: Sense.FOUR_POINT_STRICT_CAUSAL}


def _oriented(S: FiniteLorentzSpace, sense: str):
    if sense == "FUTURE":
        return S.tau, S.causal, S.chrono
    return S.tau.T, S.causal.T, S.chrono.T


def config_blocks(S: FiniteLorentzSpace, K: float, sense: str, timelike_only: bool,
                  eps_straight: float = 1e-9):
    """Yield per-(y, x) arrays describing all (z1, z2) pairs within the size bounds.

    Each block is a dict with ids (in tuple order), side lengths, the space value
    tau(z1, z2), endpoint causality, straightness and z-classes.
    """
    T, C, CH = _oriented(S, sense)
    D = ms.finite_diameter(K)
    rel = CH if timelike_only else C
    for y in range(S.n):
        for x in np.flatnonzero(CH[y]):
            Z = np.flatnonzero(rel[x])
            Z = Z[(Z != x) & (Z != y) & (T[y, Z] < D)]
            if len(Z) < 2:
                continue
            z1, z2 = np.meshgrid(Z, Z, indexing="ij")
            off = z1 != z2
            z1, z2 = z1[off], z2[off]
            c0 = float(T[y, x])
            a1, b1, a2, b2 = T[y, z1], T[x, z1], T[y, z2], T[x, z2]
            if sense == "FUTURE":
                ids = np.stack([np.full(len(z1), y), np.full(len(z1), x), z1, z2], axis=1)
            else:
                ids = np.stack([z2, z1, np.full(len(z1), x), np.full(len(z1), y)], axis=1)
            yield {
                "ids": ids, "c0": c0, "a1": a1, "b1": b1, "a2": a2, "b2": b2,
                "tau": T[z1, z2], "causal": C[z1, z2],
                "left": np.abs(a1 - c0 - b1) <= eps_straight,
                "right": np.abs(a2 - c0 - b2) <= eps_straight,
                "timelike": CH[x, z1] & CH[x, z2],
            }


def _angles(K: float, blk: dict, sel):
    """Comparison angles at x: between z1 and z2, between y and z1, between y and z2.

    Each entry is a (value, lower, upper) triple; the mask marks where all three exist.
    """
    c0 = blk["c0"]
    a1, b1, a2, b2, tz = (blk[k][sel] for k in ("a1", "b1", "a2", "b2", "tau"))
    D = ms.finite_diameter(K)
    ok = (b1 > 0) & (b2 > 0) & (np.maximum(b2, b1) < D)
    a12 = angle_interval(K, b1, b2, tz, True)
    a1y = angle_interval(K, np.full_like(b1, c0), b1, a1, False)
    a2y = angle_interval(K, np.full_like(b2, c0), b2, a2, False)
    for v in (a12, a1y, a2y):
        ok &= np.isfinite(v[0]) & np.isfinite(v[1]) & np.isfinite(v[2])
    return a12, a1y, a2y, ok


def check_four_point(S: FiniteLorentzSpace, K: float, bound, variant=FourPointVariant.TIMELIKE,
                     use_angle_version: bool = False, tol: float = 1e-7, tol_ang: float = 1e-7,
                     eps_straight: float = 1e-9) -> CheckReport:
    bound, variant = Bound(bound), FourPointVariant(variant)
    sense = Sense.FOUR_POINT_ANGLE_VERSION if use_angle_version else _SENSES[variant]
    out = Collector(sense, bound, K, tol_ang if use_angle_version else tol)
    timelike_only = variant is FourPointVariant.TIMELIKE
    strict = variant is FourPointVariant.STRICT
    for time_sense in ("FUTURE", "PAST"):
        for blk in config_blocks(S, K, time_sense, timelike_only, eps_straight):
            if bound is Bound.LOWER:
                sel = np.ones(len(blk["tau"]), bool) if strict else blk["causal"].copy()
            else:
                sel = blk["causal"] & (blk["left"] | blk["right"])
            if use_angle_version:
                sel &= blk["causal"]
            if not np.any(sel):
                continue
            ids = blk["ids"][sel]
            if use_angle_version:
                a12, a1y, a2y, ok = _angles(K, blk, sel)
                if bound is Bound.LOWER:
                    slack = a1y[2] + a2y[2] - a12[1]
                else:
                    slack = a12[2] - a1y[1] - a2y[1]
                out.add(ids[ok], a12[0][ok], (a1y[0] + a2y[0])[ok], slack[ok], kind="angle")
                continue
            t_model, c_model = four_point_batch(K, blk["c0"], blk["a1"][sel], blk["b1"][sel],
                                                blk["a2"][sel], blk["b2"][sel], eps_straight)
            t_space = blk["tau"][sel]
            slack = t_space - t_model if bound is Bound.LOWER else t_model - t_space
            out.add(ids, t_space, t_model, slack)
            if strict:
                c_space = blk["causal"][sel]
                if bound is Bound.LOWER:
                    out.add_implication(ids, c_model, c_space)
                else:
                    out.add_implication(ids, c_space, c_model)
    return out.report()


def four_point_agreement(S: FiniteLorentzSpace, K: float, bound, tol: float = 1e-7,
                         tol_ang: float = 1e-7, eps_straight: float = 1e-9) -> dict:
    """Configuration-by-configuration comparison of the tau form and the angle form."""
    bound = Bound(bound)
    compared = disagree = 0
    witnesses = []
    for time_sense in ("FUTURE", "PAST"):
        for blk in config_blocks(S, K, time_sense, True, eps_straight):
            sel = blk["causal"].copy()
            if bound is Bound.UPPER:
                sel &= blk["left"] | blk["right"]
            if not np.any(sel):
                continue
            (a12, a12_lo, a12_hi), (a1y, a1y_lo, a1y_hi), (a2y, a2y_lo, a2y_hi), ok = _angles(K, blk, sel)
            t_model, _ = four_point_batch(K, blk["c0"], blk["a1"][sel], blk["b1"][sel],
                                          blk["a2"][sel], blk["b2"][sel], eps_straight)
            t_space = blk["tau"][sel]
            if bound is Bound.LOWER:
                tau_ok = t_space >= t_model - tol
                ang_ok = a12 <= a1y + a2y + tol_ang
            else:
                tau_ok = t_space <= t_model + tol
                ang_ok = a12 >= a1y + a2y - tol_ang
            # ties within tolerance (or within the angle error range) are not counted
            width = (a12_hi - a12_lo) + (a1y_hi - a1y_lo) + (a2y_hi - a2y_lo)
            tau_margin = np.abs(t_space - t_model) > tol
            ang_margin = np.abs(a12 - a1y - a2y) > tol_ang + width
            mask = ok & tau_margin & ang_margin
            compared += int(np.count_nonzero(ok))
            bad = mask & (tau_ok != ang_ok)
            disagree += int(np.count_nonzero(bad))
            witnesses.extend(tuple(int(i) for i in r) for r in blk["ids"][sel][bad][:10])
    return {"compared": compared, "disagreements": disagree, "witnesses": witnesses[:50]}
