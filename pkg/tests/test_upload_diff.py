import pytest
from hypothesis import given, settings, strategies as st

from imgprov.jpeg_meta import parse_jpeg
from imgprov.testing import (CROP_ANCHORS, crop, encode_jpeg, fit_within, make_image,
                             recompress, resize, simulate_facebook)
from imgprov.upload_diff import diff, filename_relation

from conftest import camera_tags, full_metadata_jpeg
from reference_data import EXAMPLE_NAME


@pytest.fixture(scope="module")
def intact():
    return parse_jpeg(full_metadata_jpeg())


def test_self_diff_is_empty(intact):
    report = diff(intact, intact, before_name="a.jpg", after_name="a.jpg")
    assert report.is_empty
    assert report.filename_relation == "unchanged"
    assert report.quant_error == 0.0
    assert report.resolution_changed is None


def test_facebook_simulation_strips_all_but_artist_copyright(intact):
    after = parse_jpeg(simulate_facebook(make_image(100, 80), exif_source=camera_tags()))
    report = diff(intact, after, before_name="r069e346et.jpg", after_name=EXAMPLE_NAME)
    content_before = set(intact.content_tags())
    assert set(after.content_tags()) == {"Artist", "Copyright"}
    assert content_before - {"Artist", "Copyright"} <= set(report.exif_removed)
    assert "Artist" not in report.exif_removed and "Copyright" not in report.exif_removed
    assert report.iptc_changed and report.xmp_changed
    assert report.filename_relation == "facebook_pattern"


def test_resize_to_2048_reported_verbatim():
    before = parse_jpeg(encode_jpeg(make_image(3430, 2278), 70))
    after = parse_jpeg(simulate_facebook(make_image(3430, 2278)))
    report = diff(before, after)
    # floor(2278 * 2048 / 3430) = 1360
    assert report.resolution_changed == ((3430, 2278), (2048, 1360))


@pytest.mark.parametrize("w, h, expected", [
    (3430, 2278, (2048, 1360)),
    (2278, 3430, (1360, 2048)),
    (4096, 4096, (2048, 2048)),
    (2048, 100, (2048, 100)),
    (5000, 1, (2048, 1)),  # never collapses to zero
])
def test_fit_within_floor(w, h, expected):
    assert fit_within(w, h) == expected


def test_flickr_relation():
    assert filename_relation("r05d9d749t.jpg", "r05d9d749t_52027420848_o.jpg") == "flickr_pattern"
    assert filename_relation("a.jpg", "b.jpg") == "other"
    assert filename_relation(None, None) == "unchanged"


def test_recompression_reports_quant_error():
    img = make_image(64, 48)
    before = parse_jpeg(encode_jpeg(img, 90))
    after = parse_jpeg(recompress(encode_jpeg(img, 90), 40))
    report = diff(before, after)
    assert report.quant_error > 0.5
    assert report.resolution_changed is None


@pytest.mark.parametrize("anchor", CROP_ANCHORS)
@pytest.mark.parametrize("fraction", [0.5, 0.8])
def test_crop_fixtures_change_resolution(anchor, fraction):
    img = make_image(200, 100)
    before = parse_jpeg(encode_jpeg(img, 80))
    after = parse_jpeg(encode_jpeg(crop(img, fraction, anchor), 80))
    assert diff(before, after).resolution_changed == ((200, 100), (int(200 * fraction), int(100 * fraction)))


@pytest.mark.parametrize("factor, dims", [(2.0, (160, 120)), (1.5, (120, 90)), (0.5, (40, 30))])
def test_resize_fixtures(factor, dims):
    img = make_image(80, 60)
    after = parse_jpeg(encode_jpeg(resize(img, factor), 80))
    assert (after.width, after.height) == dims


_variants = st.sampled_from([
    lambda: full_metadata_jpeg(),
    lambda: full_metadata_jpeg(iptc=None),
    lambda: full_metadata_jpeg(width=40, height=30, quality=20),
    lambda: simulate_facebook(make_image(60, 40), exif_source=camera_tags()),
    lambda: encode_jpeg(make_image(30, 30), 95),
])


@settings(max_examples=50, deadline=None)
@given(_variants, _variants, st.sampled_from(["a.jpg", EXAMPLE_NAME, "x_52027420848_o.jpg"]))
def test_swap_exchanges_removed_and_added(make_a, make_b, name):
    a, b = parse_jpeg(make_a()), parse_jpeg(make_b())
    ab = diff(a, b, before_name="a.jpg", after_name=name)
    ba = diff(b, a, before_name=name, after_name="a.jpg")
    assert ab.exif_removed == ba.exif_added
    assert ab.exif_added == ba.exif_removed
    assert ab.exif_changed == ba.exif_changed
    assert ab.iptc_changed == ba.iptc_changed and ab.xmp_changed == ba.xmp_changed
    assert (ab.resolution_changed is None) == ((a.width, a.height) == (b.width, b.height))
    assert diff(a, a).is_empty
