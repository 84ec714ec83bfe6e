import datetime as dt
import time
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from imgprov.netprobe import (Politeness, ProbeResult, RateLimiter, TransportError,
                              UnparseableDate, facebook_photo_url, fbid_verifier,
                              flickr_photo_url, interpret_facebook_response,
                              interpret_flickr_response, probe)
from imgprov.fbid import recover_fbid

from reference_data import EXAMPLE_FBID, EXAMPLE_YY

FIXTURES = Path(__file__).parent / "fixtures"


def fixture(name):
    return (FIXTURES / name).read_text(encoding="utf-8")


class FakeClock:
    def __init__(self):
        self.now = 0.0
        self.sleeps = []

    def clock(self):
        return self.now

    def sleep(self, seconds):
        self.sleeps.append(seconds)
        self.now += seconds


class StubTransport:
    def __init__(self, responses, clock=None):
        self.responses = list(responses)
        self.calls = []
        self.clock = clock

    def __call__(self, url, headers):
        self.calls.append((url, None if self.clock is None else self.clock.now, headers))
        response = self.responses.pop(0) if len(self.responses) > 1 else self.responses[0]
        if isinstance(response, Exception):
            raise response
        return response


def fast_politeness(max_retries=3):
    fake = FakeClock()
    limiter = RateLimiter(1.0, fake.clock, fake.sleep)
    return Politeness(max_retries=max_retries, limiter=limiter), fake


# --- URL builders -----------------------------------------------------------

@pytest.mark.parametrize("fbid, url", [
    (130119042955747, "https://www.facebook.com/photo/?fbid=130119042955747"),
    (1, "https://www.facebook.com/photo/?fbid=1"),
    (1507256119676442, "https://www.facebook.com/photo/?fbid=1507256119676442"),
])
def test_facebook_url(fbid, url):
    assert facebook_photo_url(fbid) == url


@pytest.mark.parametrize("pid, url", [
    (52026001712, "https://www.flickr.com/photo.gne?id=52026001712"),
    (7542009332, "https://www.flickr.com/photo.gne?id=7542009332"),
    (1, "https://www.flickr.com/photo.gne?id=1"),
])
def test_flickr_url(pid, url):
    assert flickr_photo_url(pid) == url


@given(st.integers(1, 10**20), st.integers(1, 10**20))
def test_url_builders_injective_ascii(a, b):
    for build in (facebook_photo_url, flickr_photo_url):
        assert build(a).isascii()
        assert (build(a) == build(b)) == (a == b)


def test_url_builders_reject_non_positive():
    with pytest.raises(ValueError):
        facebook_photo_url(0)
    with pytest.raises(ValueError):
        flickr_photo_url(-5)


# --- interpretation ---------------------------------------------------------

def test_404_is_not_found():
    assert interpret_flickr_response(404, "anything").status == "not_found"
    assert interpret_flickr_response(404, "").status == "not_found"


def test_not_found_page_signature():
    assert interpret_flickr_response(200, fixture("flickr_not_found.html")).status == "not_found"


def test_public_page_date():
    result = interpret_flickr_response(200, fixture("flickr_public.html"))
    assert result == ProbeResult("exists_public", dt.date(2022, 4, 24), 200)


def test_public_page_model_epoch_date():
    result = interpret_flickr_response(200, fixture("flickr_public_model.html"))
    assert result.upload_date == dt.date(2022, 4, 24)


def test_private_page():
    result = interpret_flickr_response(200, fixture("flickr_private.html"))
    assert result.status == "private" and result.upload_date is None


def test_public_page_without_date_warns():
    with pytest.warns(UnparseableDate):
        result = interpret_flickr_response(200, fixture("flickr_public_nodate.html"))
    assert result.status == "exists_public"
    assert result.upload_date is None and result.warnings


def test_interpretation_is_pure():
    body = fixture("flickr_public.html")
    assert interpret_flickr_response(200, body) == interpret_flickr_response(200, body)


def test_custom_date_pattern_from_config():
    from imgprov.config import merge_config
    cfg = merge_config({"flickr_date_patterns": [
        {"regex": r"posted (?P<date>\d{2}\.\d{2}\.\d{2})", "format": "%m.%d.%y"}]})
    result = interpret_flickr_response(200, "<p>posted 04.24.22</p>", cfg)
    assert result.upload_date == dt.date(2022, 4, 24)


def test_facebook_interpretation():
    assert interpret_facebook_response(404, "").status == "not_found"
    assert interpret_facebook_response(200, "<html>photo</html>").status == "exists_public"
    login = interpret_facebook_response(200, "You must log in to continue")
    assert login.status == "transport_error"


# --- probing ----------------------------------------------------------------

def test_probe_404_no_retry():
    pol, _ = fast_politeness()
    transport = StubTransport([(404, "")])
    result = probe(transport, flickr_photo_url(5), pol)
    assert result.status == "not_found" and result.retries == 0
    assert len(transport.calls) == 1


def test_probe_private_no_retry():
    pol, _ = fast_politeness()
    transport = StubTransport([(200, fixture("flickr_private.html"))])
    assert probe(transport, flickr_photo_url(5), pol).retries == 0
    assert len(transport.calls) == 1


def test_probe_retries_then_succeeds():
    pol, _ = fast_politeness()
    transport = StubTransport([TransportError("reset"), (503, ""),
                               (200, fixture("flickr_public.html"))])
    result = probe(transport, flickr_photo_url(52027420848), pol)
    assert result.status == "exists_public"
    assert result.retries == 2
    assert result.upload_date == dt.date(2022, 4, 24)


def test_probe_gives_up_after_retries():
    pol, _ = fast_politeness(max_retries=2)
    transport = StubTransport([TransportError("down")])
    result = probe(transport, flickr_photo_url(1), pol)
    assert result.status == "transport_error"
    assert result.retries == 2 and len(transport.calls) == 3


def test_probe_sends_user_agent():
    pol, _ = fast_politeness()
    transport = StubTransport([(404, "")])
    probe(transport, flickr_photo_url(1), pol)
    assert transport.calls[0][2]["User-Agent"] == pol.user_agent


def test_probe_unknown_host():
    with pytest.raises(ValueError):
        probe(StubTransport([(200, "")]), "https://example.com/x")


def test_rate_limiter_gaps_with_fake_clock():
    fake = FakeClock()
    limiter = RateLimiter(1.0, fake.clock, fake.sleep)
    pol = Politeness(limiter=limiter)
    transport = StubTransport([(404, "")], clock=fake)
    for i in range(5):
        probe(transport, flickr_photo_url(i + 1), pol)
    times = [t for _, t, _ in transport.calls]
    assert all(b - a >= 1.0 for a, b in zip(times, times[1:]))
    assert fake.sleeps == [1.0] * 4


def test_rate_limiter_is_per_host():
    fake = FakeClock()
    limiter = RateLimiter(1.0, fake.clock, fake.sleep)
    limiter.run("a", lambda: None)
    limiter.run("b", lambda: None)
    assert fake.sleeps == []
    limiter.run("a", lambda: None)
    assert fake.sleeps == [1.0]


def test_politeness_real_clock():
    pol = Politeness(delay_ms=1000)
    transport = StubTransport([(404, "")])
    start = time.monotonic()
    for i in range(3):
        probe(transport, flickr_photo_url(i + 1), pol)
    assert time.monotonic() - start >= 2.0


def test_fbid_verifier_over_stub_transport():
    pol, _ = fast_politeness()
    target = facebook_photo_url(EXAMPLE_FBID)

    def transport(url, headers):
        return (200, "<html>photo</html>") if url == target else (404, "")

    rec = recover_fbid(EXAMPLE_YY, fbid_verifier(transport, pol))
    assert (rec.fbid, rec.factor) == (EXAMPLE_FBID, 2)
