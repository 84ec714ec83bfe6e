"""URL construction and polite probing of Facebook and Flickr photo pages.

All requests go through a transport callable, ``transport(url, headers)
-> (status_code, body)``, so tests and offline runs substitute a stub.
A transport signals a network failure by raising ``TransportError`` (or
any ``OSError``).
"""

from __future__ import annotations

import datetime as dt
import logging
import re
import threading
import time
import urllib.error
import urllib.request
import warnings
from dataclasses import dataclass, field
from typing import Callable
from urllib.parse import urlsplit

from .config import default_config

__all__ = [
    "ProbeResult",
    "RateLimiter",
    "TransportError",
    "UnparseableDate",
    "UrllibTransport",
    "facebook_photo_url",
    "fbid_verifier",
    "flickr_photo_url",
    "interpret_facebook_response",
    "interpret_flickr_response",
    "probe",
]

log = logging.getLogger(__name__)

Transport = Callable[[str, dict], tuple[int, str]]

EXISTS_PUBLIC = "exists_public"
PRIVATE = "private"
NOT_FOUND = "not_found"
TRANSPORT_ERROR = "transport_error"


class TransportError(OSError):
    pass


class UnparseableDate(UserWarning):
    """A public Flickr page yielded no upload date."""


@dataclass(frozen=True)
class ProbeResult:
    status: str
    upload_date: dt.date | None = None
    raw_status_code: int | None = None
    retries: int = 0
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        if self.upload_date is not None and self.status != EXISTS_PUBLIC:
            raise ValueError("upload_date is only meaningful for public photos")


def facebook_photo_url(fbid: int) -> str:
    if fbid <= 0:
        raise ValueError("fbid must be positive")
    return f"https://www.facebook.com/photo/?fbid={int(fbid)}"


def flickr_photo_url(photo_id: int) -> str:
    if photo_id <= 0:
        raise ValueError("photo_id must be positive")
    return f"https://www.flickr.com/photo.gne?id={int(photo_id)}"


def _extract_date(body: str, patterns) -> dt.date | None:
    for pat in patterns:
        m = re.search(pat["regex"], body)
        if not m:
            continue
        raw = m.group("date")
        try:
            if pat["format"] == "epoch":
                return dt.datetime.fromtimestamp(int(raw), tz=dt.timezone.utc).date()
            return dt.datetime.strptime(raw, pat["format"]).date()
        except (ValueError, OverflowError, OSError):
            continue
    return None


def interpret_flickr_response(status_code: int, body: str, config: dict | None = None) -> ProbeResult:
    cfg = config if config is not None else default_config()
    body = body or ""
    if status_code == 404 or any(sig in body for sig in cfg["not_found_signatures"]):
        return ProbeResult(NOT_FOUND, raw_status_code=status_code)
    if status_code in (401, 403) or any(sig in body for sig in cfg["privacy_signatures"]):
        return ProbeResult(PRIVATE, raw_status_code=status_code)
    if not 200 <= status_code < 300:
        return ProbeResult(TRANSPORT_ERROR, raw_status_code=status_code)
    date = _extract_date(body, cfg["flickr_date_patterns"])
    if date is None:
        msg = "public Flickr page without a recognizable upload date"
        warnings.warn(msg, UnparseableDate, stacklevel=2)
        return ProbeResult(EXISTS_PUBLIC, raw_status_code=status_code, warnings=(msg,))
    return ProbeResult(EXISTS_PUBLIC, upload_date=date, raw_status_code=status_code)


def interpret_facebook_response(status_code: int, body: str, config: dict | None = None) -> ProbeResult:
    """Existence check only; a login wall is reported as undecidable."""
    cfg = config if config is not None else default_config()
    body = body or ""
    if status_code == 404:
        return ProbeResult(NOT_FOUND, raw_status_code=status_code)
    if 200 <= status_code < 300:
        if any(sig in body for sig in cfg["facebook_login_signatures"]):
            return ProbeResult(TRANSPORT_ERROR, raw_status_code=status_code,
                               warnings=("login required to decide",))
        return ProbeResult(EXISTS_PUBLIC, raw_status_code=status_code)
    return ProbeResult(TRANSPORT_ERROR, raw_status_code=status_code)


_INTERPRETERS = {
    "www.flickr.com": interpret_flickr_response,
    "flickr.com": interpret_flickr_response,
    "www.facebook.com": interpret_facebook_response,
    "facebook.com": interpret_facebook_response,
}


class RateLimiter:
    """Keeps at least `delay` seconds between requests to the same host.

    Requests to one host are serialized; the clock and sleep functions are
    injectable for tests.
    """

    def __init__(self, delay: float, clock=time.monotonic, sleep=time.sleep):
        self.delay = delay
        self._clock = clock
        self._sleep = sleep
        self._guard = threading.Lock()
        self._locks: dict[str, threading.Lock] = {}
        self._last: dict[str, float] = {}

    def _lock_for(self, host: str) -> threading.Lock:
        with self._guard:
            return self._locks.setdefault(host, threading.Lock())

    def run(self, host: str, fn: Callable[[], tuple[int, str]]):
        with self._lock_for(host):
            last = self._last.get(host)
            if last is not None:
                wait = last + self.delay - self._clock()
                if wait > 0:
                    self._sleep(wait)
            try:
                return fn()
            finally:
                self._last[host] = self._clock()


@dataclass
class Politeness:
    delay_ms: int = 1000
    max_retries: int = 3
    user_agent: str = default_config()["user_agent"]
    limiter: RateLimiter | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.limiter is None:
            self.limiter = RateLimiter(self.delay_ms / 1000.0)

    @classmethod
    def from_config(cls, cfg: dict, **kw) -> "Politeness":
        return cls(delay_ms=cfg["politeness_delay_ms"], max_retries=cfg["max_retries"],
                   user_agent=cfg["user_agent"], **kw)


def _retryable(code: int) -> bool:
    return code == 429 or code >= 500


def probe(transport: Transport, url: str, politeness: Politeness | None = None,
          config: dict | None = None) -> ProbeResult:
    """Fetch `url` politely and interpret the response for its host.

    Transport exceptions, HTTP 429 and 5xx are retried up to
    `max_retries` times; any other answer is final.
    """
    pol = politeness if politeness is not None else Politeness()
    host = urlsplit(url).hostname or ""
    interpret = _INTERPRETERS.get(host)
    if interpret is None:
        raise ValueError(f"no interpreter for host {host!r}")
    headers = {"User-Agent": pol.user_agent}

    retries = 0
    last_code = None
    while True:
        try:
            code, body = pol.limiter.run(host, lambda: transport(url, headers))
        except OSError as exc:
            log.info("transport failure for %s: %s", url, exc)
            code, body = None, None
        if code is not None and not _retryable(code):
            result = interpret(code, body, config)
            return ProbeResult(result.status, result.upload_date, code, retries, result.warnings)
        last_code = code
        if retries >= pol.max_retries:
            return ProbeResult(TRANSPORT_ERROR, raw_status_code=last_code, retries=retries)
        retries += 1


class UrllibTransport:
    """Live HTTP GET via urllib."""

    def __init__(self, timeout: float = 20.0):
        self.timeout = timeout

    def __call__(self, url: str, headers: dict) -> tuple[int, str]:
        req = urllib.request.Request(url, headers=headers, method="GET")
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                return resp.status, resp.read().decode("utf-8", "replace")
        except urllib.error.HTTPError as exc:
            return exc.code, exc.read().decode("utf-8", "replace")
        except urllib.error.URLError as exc:
            raise TransportError(str(exc.reason)) from exc


def fbid_verifier(transport: Transport, politeness: Politeness | None = None,
                  config: dict | None = None):
    """Adapt `probe` to the verifier protocol used by fbid recovery."""
    pol = politeness if politeness is not None else Politeness()

    def verify(fbid: int) -> str:
        result = probe(transport, facebook_photo_url(fbid), pol, config)
        if result.status in (EXISTS_PUBLIC, PRIVATE):
            return "exists"
        if result.status == NOT_FOUND:
            return "not_found"
        return "unknown"

    return verify
