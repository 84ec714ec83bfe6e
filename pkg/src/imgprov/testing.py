"""Fixture generation for tests and demos (requires Pillow).

Reproduces the pre-upload manipulations (crop, resize, recompress) and a
simulated Facebook pass-through, plus byte-level helpers to insert or
strip JPEG segments without re-encoding.
"""

from __future__ import annotations

import io
import struct

from PIL import Image

FACEBOOK_MAX_DIM = 2048
CROP_ANCHORS = ("top-left", "bottom-right", "center")


def make_image(width: int, height: int, seed: int = 0) -> Image.Image:
    """Deterministic RGB test card with enough texture to compress."""
    base = Image.radial_gradient("L").resize((width, height))
    ramp = Image.linear_gradient("L").resize((width, height))
    ramp = ramp.rotate(seed % 360, expand=False)
    noise = Image.effect_noise((width, height), 32 + seed % 16)
    return Image.merge("RGB", (base, ramp, noise))


def encode_jpeg(img: Image.Image, quality: int = 75, *, exif: bytes | None = None,
                xmp: bytes | None = None, progressive: bool = False) -> bytes:
    buf = io.BytesIO()
    kw = {"quality": quality, "progressive": progressive}
    if exif is not None:
        kw["exif"] = exif
    if xmp is not None:
        kw["xmp"] = xmp
    img.convert("RGB").save(buf, "JPEG", **kw)
    return buf.getvalue()


def make_exif(tags: dict[int, object]) -> bytes:
    ex = Image.Exif()
    exif_ifd = {}
    for tag, value in tags.items():
        if tag >= 0x8200 and tag not in (0x8298, 0x8769):
            exif_ifd[tag] = value
        else:
            ex[tag] = value
    if exif_ifd:
        sub = ex.get_ifd(0x8769)
        sub.update(exif_ifd)
    return ex.tobytes()


CAMERA_TAGS = {
    0x010F: "NIKON CORPORATION",
    0x0110: "NIKON D90",
    0x0131: "Adobe Photoshop",
    0x013B: "Jane Photographer",
    0x8298: "(c) Jane Photographer",
    0x9003: "2014:06:01 12:00:00",
    0x829A: (1, 250),
    0x8827: 200,
}


def make_xmp(original_document_id: str, preserved_filename: str) -> bytes:
    return (
        '<?xpacket begin="﻿" id="W5M0MpCehiHzreSzNTczkc9d"?>'
        '<x:xmpmeta xmlns:x="adobe:ns:meta/">'
        '<rdf:RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#">'
        '<rdf:Description rdf:about="" xmlns:xmpMM="http://ns.adobe.com/xap/1.0/mm/"'
        f' xmpMM:OriginalDocumentID="{original_document_id}"'
        f' xmpMM:PreservedFileName="{preserved_filename}"/>'
        '</rdf:RDF></x:xmpmeta><?xpacket end="w"?>'
    ).encode("utf-8")


def make_iptc(records: dict[tuple[int, int], bytes]) -> bytes:
    """Serialize IIM datasets: 0x1C, record, dataset, 2-byte length, data."""
    out = bytearray()
    for (record, dataset), value in sorted(records.items()):
        out += struct.pack(">BBBH", 0x1C, record, dataset, len(value)) + value
    return bytes(out)


def photoshop_app13(iptc_block: bytes) -> bytes:
    body = b"Photoshop 3.0\x00" + b"8BIM" + struct.pack(">H", 0x0404) + b"\x00\x00"
    body += struct.pack(">I", len(iptc_block)) + iptc_block
    if len(iptc_block) & 1:
        body += b"\x00"
    return b"\xff\xed" + struct.pack(">H", len(body) + 2) + body


def iter_segments(jpeg: bytes):
    """Yield (offset, marker, total_length) for header segments up to SOS."""
    pos = 2
    while pos + 4 <= len(jpeg):
        marker = jpeg[pos + 1]
        length = struct.unpack(">H", jpeg[pos + 2:pos + 4])[0]
        yield pos, marker, length + 2
        if marker == 0xDA:
            return
        pos += length + 2


def strip_segments(jpeg: bytes, marker: int, prefix: bytes = b"") -> bytes:
    """Drop header segments with `marker` whose payload starts with `prefix`."""
    out = bytearray(jpeg[:2])
    last = 2
    for pos, mk, total in iter_segments(jpeg):
        payload = jpeg[pos + 4:pos + total]
        if mk == marker and payload.startswith(prefix):
            out += jpeg[last:pos]
            last = pos + total
    out += jpeg[last:]
    return bytes(out)


def insert_segment(jpeg: bytes, segment: bytes) -> bytes:
    """Insert a complete segment after SOI and any APP0/APP1 segments."""
    insert_at = 2
    for pos, mk, total in iter_segments(jpeg):
        if mk in (0xE0, 0xE1):
            insert_at = pos + total
        else:
            break
    return jpeg[:insert_at] + segment + jpeg[insert_at:]


def fit_within(width: int, height: int, max_dim: int = FACEBOOK_MAX_DIM) -> tuple[int, int]:
    """Aspect-preserving downscale so the longer side is `max_dim` (floor)."""
    longest = max(width, height)
    if longest <= max_dim:
        return width, height
    if width >= height:
        return max_dim, max(1, height * max_dim // width)
    return max(1, width * max_dim // height), max_dim


def crop(img: Image.Image, fraction: float, anchor: str = "center") -> Image.Image:
    if not 0 < fraction <= 1:
        raise ValueError("fraction must be in (0, 1]")
    w, h = img.size
    cw, ch = max(1, int(w * fraction)), max(1, int(h * fraction))
    if anchor == "top-left":
        left, top = 0, 0
    elif anchor == "bottom-right":
        left, top = w - cw, h - ch
    elif anchor == "center":
        left, top = (w - cw) // 2, (h - ch) // 2
    else:
        raise ValueError(f"unknown anchor {anchor!r}")
    return img.crop((left, top, left + cw, top + ch))


def resize(img: Image.Image, factor: float) -> Image.Image:
    w, h = img.size
    return img.resize((max(1, int(w * factor)), max(1, int(h * factor))))


def recompress(jpeg: bytes, quality: int) -> bytes:
    with Image.open(io.BytesIO(jpeg)) as im:
        return encode_jpeg(im, quality)


def simulate_facebook(img: Image.Image, quality: int = 85, exif_source: dict | None = None) -> bytes:
    """Resize to the 2048 px limit, keep only Artist/Copyright, drop IPTC/XMP."""
    w, h = img.size
    target = fit_within(w, h)
    if target != (w, h):
        img = img.resize(target)
    kept = {t: v for t, v in (exif_source or {}).items() if t in (0x013B, 0x8298)}
    return encode_jpeg(img, quality, exif=make_exif(kept) if kept else None)
