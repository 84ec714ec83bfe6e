"""Score which platform a downloaded image most recently passed through."""

import json

from imgprov import classify_filename, classify_platform, extract_signals, parse_jpeg
from imgprov.testing import CAMERA_TAGS, encode_jpeg, make_exif, make_image, simulate_facebook

camera = {t: v for t, v in CAMERA_TAGS.items() if t != 0x829A}
cases = {
    "280372071_130119036289081_1523944611184590851_n.jpeg":
        simulate_facebook(make_image(3430, 2278), exif_source=camera),
    "r05d9d749t_52027420848_o.jpg":
        encode_jpeg(make_image(800, 600), 90, exif=make_exif(camera)),
    "r069e346et.jpg":
        encode_jpeg(make_image(800, 600), 90, exif=make_exif(camera)),
}

for name, data in cases.items():
    signals = extract_signals(parse_jpeg(data), classify_filename(name))
    verdict = classify_platform(signals)
    print(name)
    print("  ", json.dumps({s.platform: s.score for s in verdict.ranking}))
    print("  ", verdict.to_dict()["summary"])
