"""Bracketing root finder shared by the cut-time, tan x = x and distance solvers."""

from __future__ import annotations

import math


class SolverError(RuntimeError):
    """A numerical solver could not produce a certified answer."""


class BracketError(SolverError):
    def __init__(self, lo, hi, flo, fhi):
        self.lo, self.hi, self.flo, self.fhi = lo, hi, flo, fhi
        super().__init__(
            f"no sign change on [{lo!r}, {hi!r}]: f(lo) = {flo!r}, f(hi) = {fhi!r}"
        )


def bisect(f, lo: float, hi: float, tol: float = 1e-14, maxiter: int = 400) -> float:
    """Root of ``f`` on [lo, hi] by bisection.

    Requires f(lo) * f(hi) <= 0. The bracket is kept at every step and the
    midpoint of the final bracket (width <= tol, or exhausted to adjacent
    floats) is returned.
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo!r}, {hi!r}]")
    if tol <= 0:
        raise ValueError("tol must be positive")
    flo, fhi = f(lo), f(hi)
    if math.isnan(flo) or math.isnan(fhi) or flo * fhi > 0:
        raise BracketError(lo, hi, flo, fhi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol or mid <= lo or mid >= hi:
            break
        fmid = f(mid)
        if fmid == 0:
            return mid
        if (fmid < 0) == (flo < 0):
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
    return 0.5 * (lo + hi)
