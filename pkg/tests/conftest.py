import pytest

from imgprov.flickr_time import Anchor, AnchorIndex
from imgprov.testing import (CAMERA_TAGS, encode_jpeg, insert_segment, make_exif,
                             make_image, make_iptc, make_xmp, photoshop_app13)
from PIL.TiffImagePlugin import IFDRational

from reference_data import (CRAWL_DATE, CRAWL_END, CRAWL_OUTLIERS, CRAWL_PUBLIC_COUNT,
                            CRAWL_START)


def camera_tags():
    tags = dict(CAMERA_TAGS)
    tags[0x829A] = IFDRational(1, 250)
    return tags


IPTC_BLOCK = make_iptc({(2, 5): b"Harbour at dusk", (2, 80): b"Jane Photographer",
                        (2, 116): b"(c) Jane Photographer"})


def full_metadata_jpeg(width=100, height=80, quality=60, seed=0, iptc=IPTC_BLOCK):
    data = encode_jpeg(make_image(width, height, seed), quality,
                       exif=make_exif(camera_tags()),
                       xmp=make_xmp("C7D2E48C578C26E4E237B97213216BCC", "r069e346et.TIF"))
    if iptc is not None:
        data = insert_segment(data, photoshop_app13(iptc))
    return data


@pytest.fixture(scope="session")
def intact_jpeg():
    return full_metadata_jpeg()


def reference_crawl_index():
    """1035 public anchors spread over the crawled range plus the four outliers."""
    span = CRAWL_END - CRAWL_START
    ids = []
    for i in range(CRAWL_PUBLIC_COUNT):
        pid = CRAWL_START + round(i * span / (CRAWL_PUBLIC_COUNT - 1))
        while pid in CRAWL_OUTLIERS:
            pid += 1
        ids.append(pid)
    assert len(set(ids)) == CRAWL_PUBLIC_COUNT
    anchors = [Anchor(pid, "public", date=CRAWL_DATE) for pid in ids]
    anchors += [Anchor(pid, "public", date=d) for pid, d in CRAWL_OUTLIERS.items()]
    return AnchorIndex(anchors)


@pytest.fixture(scope="session")
def crawl_index():
    return reference_crawl_index()


# --- acceptance reporting ----------------------------------------------------

_CRITERIA = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    failed = report.failed
    if report.when == "call" or failed:
        detail = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
        previous = _CRITERIA.get(number)
        ok = not failed and (previous is None or previous[1])
        _CRITERIA[number] = (title, ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok, detail = _CRITERIA[number]
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
    passed = sum(ok for _, ok, _ in _CRITERIA.values())
    terminalreporter.write_line(f"{passed}/{len(_CRITERIA)} criteria passed")
