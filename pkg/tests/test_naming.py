import pytest
from hypothesis import given, strategies as st

from imgprov.naming import (FacebookEra, FlickrLayout, classify_filename,
                            parse_facebook_name, parse_flickr_name)

from reference_data import EXAMPLE_NAME, FLICKR_TABLE

digits = st.text(alphabet="0123456789", min_size=1, max_size=20)


def test_example_name_is_modern_without_fbid():
    fb = parse_facebook_name(EXAMPLE_NAME)
    assert fb.era is FacebookEra.MODERN
    assert (fb.xx, fb.yy, fb.zz) == ("280372071", "130119036289081", "1523944611184590851")
    assert fb.aa_fbid is None
    assert fb.extension == "jpeg"
    assert fb.maybe_three_number_legacy


def test_modern_name_with_fbid():
    name = "280372071_130119036289081_1523944611184590851_n_130119042955747.jpeg"
    fb = parse_facebook_name(name)
    assert fb.era is FacebookEra.MODERN
    assert fb.yy == "130119036289081"
    assert fb.aa_fbid == "130119042955747"
    assert not fb.maybe_three_number_legacy
    assert fb.filename == name


def test_legacy_five_number_name():
    fb = parse_facebook_name("10150123_10150456_500123_7788_99_n.jpg")
    assert fb.era is FacebookEra.LEGACY5
    assert fb.legacy_parts == ("10150123", "10150456", "500123", "7788", "99")
    assert fb.filename == "10150123_10150456_500123_7788_99_n.jpg"


@pytest.mark.parametrize("name", [
    "IMG_1234.jpg",
    "1_2_n.jpg",
    "1_2_3_x.jpg",
    "1_2_3_n_x.jpg",
    "1_2_3_n.png",
    "a_2_3_n.jpg",
    "1_2_3_n",
    "+1_2_3_n.jpg",
    "１_2_3_n.jpg",  # fullwidth digit
])
def test_facebook_no_match(name):
    assert parse_facebook_name(name) is None


def test_extension_case_insensitive():
    fb = parse_facebook_name("1_2_3_n.JPG")
    assert fb is not None and fb.extension == "JPG"
    assert fb.filename == "1_2_3_n.JPG"


def test_directory_separators_refused():
    with pytest.raises(ValueError):
        parse_facebook_name("dir/1_2_3_n.jpg")


@pytest.mark.parametrize("name, layout, photo_id, companion", FLICKR_TABLE)
def test_flickr_table_rows(name, layout, photo_id, companion):
    hyps = parse_flickr_name(name)
    assert hyps, name
    top = hyps[0]
    assert top.layout.value == layout
    assert (top.photo_id, top.companion) == (photo_id, companion)
    assert top.filename == name


def test_secret_name_also_offers_filename_reading():
    hyps = parse_flickr_name("52027420848_4efc66e8a4_o.jpg")
    assert [h.layout for h in hyps] == [FlickrLayout.ID_SECRET, FlickrLayout.ID_PREFIX]
    assert {h.confidence for h in hyps} == {"ambiguous"}


def test_unambiguous_rows_are_certain():
    for name in ("r05d9d749t_52027420848_o.jpg", "52027420848_r05d9d749t_o.jpg",
                 "test_52027420848_o.jpg"):
        (hyp,) = parse_flickr_name(name)
        assert hyp.confidence == "certain"


def test_numeric_original_name_is_ambiguous():
    hyps = parse_flickr_name("2022042400_52027420848_o.jpg")
    assert [h.layout for h in hyps] == [FlickrLayout.PREFIX_ID, FlickrLayout.ID_PREFIX]
    assert [h.photo_id for h in hyps] == ["52027420848", "2022042400"]
    assert all(h.confidence == "ambiguous" for h in hyps)


def test_underscored_original_filename():
    (hyp,) = parse_flickr_name("my_holiday_photo_52027420848_o.jpg")
    assert hyp.layout is FlickrLayout.PREFIX_ID
    assert hyp.companion == "my_holiday_photo"


def test_historical_id_lengths():
    assert parse_flickr_name("7542009332_abcdef1234_o.jpg")[0].photo_id == "7542009332"
    assert parse_flickr_name("x_36070463433_o.jpg")[0].photo_id == "36070463433"
    assert parse_flickr_name("x_123456789_o.jpg") == []
    assert parse_flickr_name("x_1234567890123_o.jpg") == []
    assert parse_flickr_name("x_1234567890123_o.jpg", max_id_digits=13)


@pytest.mark.parametrize("name", ["r05d9d749t_52027420848.jpg", "52027420848_o.jpg",
                                  "r05d9d749t.jpg", "_52027420848_o.jpg"])
def test_flickr_no_match(name):
    assert parse_flickr_name(name) == []


def test_classify_unchanged_name():
    verdict = classify_filename("r069e346et.jpg")
    assert verdict.generic_unchanged
    assert verdict.facebook is None and verdict.flickr == []


def test_classify_facebook_name():
    verdict = classify_filename(EXAMPLE_NAME)
    assert verdict.facebook is not None
    assert verdict.flickr == []
    assert not verdict.generic_unchanged


def test_classify_flickr_title_name():
    verdict = classify_filename("test_52027420848_o.jpg")
    assert verdict.facebook is None
    assert verdict.flickr[0].layout is FlickrLayout.PREFIX_ID
    assert verdict.flickr[0].companion == "test"


@given(digits, digits, digits, st.none() | digits, st.sampled_from(["jpg", "jpeg", "JPG"]))
def test_facebook_round_trip(xx, yy, zz, aa, ext):
    stem = "_".join([xx, yy, zz, "n"] + ([aa] if aa else []))
    name = f"{stem}.{ext}"
    fb = parse_facebook_name(name)
    assert fb is not None
    assert fb.filename == name
    assert parse_flickr_name(name) == []


companion_text = st.text(alphabet="abcdefghijklmnopqrstuvwxyz0123456789_-", min_size=1,
                         max_size=24).filter(lambda s: not s.startswith("_") and not s.endswith("_"))


@given(st.integers(10**9, 10**12 - 1), companion_text, st.sampled_from(list(FlickrLayout)))
def test_flickr_round_trip(pid, companion, layout):
    if layout is FlickrLayout.PREFIX_ID:
        name = f"{companion}_{pid}_o.jpg"
    else:
        name = f"{pid}_{companion}_o.jpg"
    hyps = parse_flickr_name(name)
    assert hyps
    for h in hyps:
        assert h.filename == name
    assert parse_facebook_name(name) is None
