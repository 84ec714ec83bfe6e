"""Recover a Facebook photo ID (fbid) from the second filename number.

In observed downloads the fbid exceeds the filename's second number (yy)
by k * 3333333 with 0 <= k <= 64, so at most 65 candidates need checking.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Literal

__all__ = [
    "FBID_STEP",
    "MAX_FACTOR",
    "FbidCandidateSet",
    "FbidRecovery",
    "NegativeDifference",
    "NotAMultiple",
    "VerifierFailure",
    "candidate_fbids",
    "factor_of",
    "recover_fbid",
]

log = logging.getLogger(__name__)

FBID_STEP = 3333333
MAX_FACTOR = 64
LEADING_DIGITS = 6

Verdict = Literal["exists", "not_found", "unknown"]


class NotAMultiple(ValueError):
    pass


class NegativeDifference(ValueError):
    pass


class VerifierFailure(RuntimeError):
    """The verifier could not answer; `last_k` is the factor being probed."""

    def __init__(self, message: str, last_k: int, probes: int):
        super().__init__(message)
        self.last_k = last_k
        self.probes = probes


@dataclass(frozen=True)
class FbidCandidateSet:
    yy: int
    candidates: tuple[int, ...]
    demoted: tuple[bool, ...]
    step: int = FBID_STEP
    max_factor: int = MAX_FACTOR

    def probe_order(self) -> list[int]:
        """Factors in probing order: ascending k, demoted candidates last."""
        ks = range(len(self.candidates))
        return [k for k in ks if not self.demoted[k]] + [k for k in ks if self.demoted[k]]

    def to_dict(self, url_for: Callable[[int], str] | None = None) -> dict:
        rows = []
        for k, (fbid, demoted) in enumerate(zip(self.candidates, self.demoted)):
            row = {"k": k, "fbid": fbid, "demoted": demoted}
            if url_for is not None:
                row["url"] = url_for(fbid)
            rows.append(row)
        return {"yy": self.yy, "step": self.step, "max_factor": self.max_factor,
                "candidates": rows}


def candidate_fbids(yy: int, max_factor: int = MAX_FACTOR) -> FbidCandidateSet:
    """All fbid candidates yy + k*3333333 for k = 0..max_factor.

    Candidates whose leading six digits differ from yy's are flagged as
    demoted (a carry moved them), not dropped.
    """
    if yy < 0:
        raise ValueError("yy must be non-negative")
    if max_factor < 0:
        raise ValueError("max_factor must be non-negative")
    prefix = str(yy)[:LEADING_DIGITS]
    candidates = tuple(yy + k * FBID_STEP for k in range(max_factor + 1))
    demoted = tuple(str(c)[:LEADING_DIGITS] != prefix for c in candidates)
    return FbidCandidateSet(yy=yy, candidates=candidates, demoted=demoted,
                            max_factor=max_factor)


def factor_of(yy: int, fbid: int) -> int:
    diff = fbid - yy
    if diff < 0:
        raise NegativeDifference(f"fbid {fbid} is smaller than yy {yy}")
    k, rem = divmod(diff, FBID_STEP)
    if rem:
        raise NotAMultiple(f"difference {diff} is not a multiple of {FBID_STEP}")
    return k


@dataclass(frozen=True)
class FbidRecovery:
    yy: int
    fbid: int | None
    factor: int | None
    probes: int

    @property
    def exhausted(self) -> bool:
        return self.fbid is None


def recover_fbid(yy: int, verifier: Callable[[int], Verdict],
                 max_factor: int = MAX_FACTOR) -> FbidRecovery:
    """Probe candidates until the verifier confirms one.

    `verifier` maps a candidate fbid to "exists", "not_found" or "unknown".
    An "unknown" answer or an exception from the verifier aborts the search
    with VerifierFailure, because a later hit could not be trusted as the
    first one.
    """
    cset = candidate_fbids(yy, max_factor)
    probes = 0
    for k in cset.probe_order():
        candidate = cset.candidates[k]
        probes += 1
        try:
            verdict = verifier(candidate)
        except Exception as exc:
            raise VerifierFailure(f"verifier raised for k={k}: {exc}", k, probes) from exc
        log.debug("fbid probe k=%d candidate=%d -> %s", k, candidate, verdict)
        if verdict == "exists":
            return FbidRecovery(yy=yy, fbid=candidate, factor=k, probes=probes)
        if verdict != "not_found":
            raise VerifierFailure(f"verifier returned {verdict!r} for k={k}", k, probes)
    return FbidRecovery(yy=yy, fbid=None, factor=None, probes=probes)
