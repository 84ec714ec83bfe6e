"""Compare a file before and after a simulated Facebook upload."""

import json

from imgprov import parse_jpeg
from imgprov.testing import CAMERA_TAGS, encode_jpeg, make_exif, make_image, simulate_facebook
from imgprov.upload_diff import diff

camera = {t: v for t, v in CAMERA_TAGS.items() if t != 0x829A}
img = make_image(3430, 2278)
before = parse_jpeg(encode_jpeg(img, 95, exif=make_exif(camera)))
after = parse_jpeg(simulate_facebook(img, exif_source=camera))

report = diff(before, after, before_name="r069e346et.jpg",
              after_name="280372071_130119036289081_1523944611184590851_n.jpeg")
print(json.dumps(report.to_dict(), indent=2))
