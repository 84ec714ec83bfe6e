"""Read dimensions, quantization tables and metadata presence from a JPEG."""

from imgprov import parse_jpeg, quant_similarity
from imgprov.testing import CAMERA_TAGS, encode_jpeg, make_exif, make_image, make_xmp

img = make_image(640, 480)
original = encode_jpeg(img, 92, exif=make_exif(CAMERA_TAGS),
                       xmp=make_xmp("C7D2E48C578C26E4E237B97213216BCC", "IMG_0042.TIF"))
meta = parse_jpeg(original)
print(f"{meta.width}x{meta.height} progressive={meta.progressive}")
print(f"Exif tags: {sorted(meta.content_tags())}")
print(f"XMP preserved filename: {meta.xmp_preserved_filename}")
print(f"luma table starts {meta.quant_tables[0][:8]}")

for q in (90, 75, 50):
    other = parse_jpeg(encode_jpeg(img, q))
    print(f"quality {q}: table distance {quant_similarity(meta.quant_tables, other.quant_tables):.3f}")
