"""Marker-level JPEG metadata parsing.

Walks the marker segments of a JPEG stream and collects what the
provenance rules need: frame dimensions, quantization tables, a subset of
Exif (IFD0 and the Exif sub-IFD), the IPTC-IIM block from the Photoshop
APP13 segment, and two XMP media-management properties. Pixel data is
never decoded.
"""

from __future__ import annotations

import hashlib
import math
import re
import struct
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import Mapping

__all__ = [
    "JpegSummary",
    "MalformedJpeg",
    "MismatchedTables",
    "compute_iptc_digest",
    "parse_jpeg",
    "quant_similarity",
    "ZIGZAG",
]


class MalformedJpeg(ValueError):
    """The byte stream cannot be analyzed as a JPEG file."""


class MismatchedTables(ValueError):
    """Two quantization table sets share no table id."""


# ZIGZAG[i] is the natural (row-major) index of the i-th coefficient in
# the order DQT stores them.
ZIGZAG = (
    0, 1, 8, 16, 9, 2, 3, 10,
    17, 24, 32, 25, 18, 11, 4, 5,
    12, 19, 26, 33, 40, 48, 41, 34,
    27, 20, 13, 6, 7, 14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36,
    29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46,
    53, 60, 61, 54, 47, 55, 62, 63,
)

_SOF_HUFFMAN = {0xC0: False, 0xC1: False, 0xC2: True}
_SOF_OTHER = {0xC3, 0xC5, 0xC6, 0xC7, 0xC9, 0xCA, 0xCB, 0xCD, 0xCE, 0xCF}
_STANDALONE = {0x01, *range(0xD0, 0xD8)}

_EXIF_HEADER = b"Exif\x00\x00"
_XMP_HEADER = b"http://ns.adobe.com/xap/1.0/\x00"
_PHOTOSHOP_HEADER = b"Photoshop 3.0\x00"
_IPTC_RESOURCE = 0x0404
_XMP_MM = "http://ns.adobe.com/xap/1.0/mm/"

_MAX_IFD_ENTRIES = 512
_EXIF_IFD_POINTER = 0x8769

EXIF_TAG_NAMES = {
    0x010E: "ImageDescription",
    0x010F: "Make",
    0x0110: "Model",
    0x0112: "Orientation",
    0x011A: "XResolution",
    0x011B: "YResolution",
    0x0128: "ResolutionUnit",
    0x0131: "Software",
    0x0132: "DateTime",
    0x013B: "Artist",
    0x013E: "WhitePoint",
    0x013F: "PrimaryChromaticities",
    0x0211: "YCbCrCoefficients",
    0x0213: "YCbCrPositioning",
    0x0214: "ReferenceBlackWhite",
    0x8298: "Copyright",
    0x8769: "ExifOffset",
    0x8825: "GPSInfo",
    0x829A: "ExposureTime",
    0x829D: "FNumber",
    0x8822: "ExposureProgram",
    0x8827: "ISOSpeedRatings",
    0x8830: "SensitivityType",
    0x9000: "ExifVersion",
    0x9003: "DateTimeOriginal",
    0x9004: "DateTimeDigitized",
    0x9010: "OffsetTime",
    0x9011: "OffsetTimeOriginal",
    0x9012: "OffsetTimeDigitized",
    0x9101: "ComponentsConfiguration",
    0x9102: "CompressedBitsPerPixel",
    0x9201: "ShutterSpeedValue",
    0x9202: "ApertureValue",
    0x9203: "BrightnessValue",
    0x9204: "ExposureBiasValue",
    0x9205: "MaxApertureValue",
    0x9206: "SubjectDistance",
    0x9207: "MeteringMode",
    0x9208: "LightSource",
    0x9209: "Flash",
    0x920A: "FocalLength",
    0x927C: "MakerNote",
    0x9286: "UserComment",
    0x9290: "SubSecTime",
    0x9291: "SubSecTimeOriginal",
    0x9292: "SubSecTimeDigitized",
    0xA000: "FlashpixVersion",
    0xA001: "ColorSpace",
    0xA002: "ExifImageWidth",
    0xA003: "ExifImageHeight",
    0xA005: "InteropOffset",
    0xA20E: "FocalPlaneXResolution",
    0xA20F: "FocalPlaneYResolution",
    0xA210: "FocalPlaneResolutionUnit",
    0xA217: "SensingMethod",
    0xA300: "FileSource",
    0xA301: "SceneType",
    0xA401: "CustomRendered",
    0xA402: "ExposureMode",
    0xA403: "WhiteBalance",
    0xA404: "DigitalZoomRatio",
    0xA405: "FocalLengthIn35mmFilm",
    0xA406: "SceneCaptureType",
    0xA408: "Contrast",
    0xA409: "Saturation",
    0xA40A: "Sharpness",
    0xA420: "ImageUniqueID",
    0xA430: "CameraOwnerName",
    0xA431: "BodySerialNumber",
    0xA432: "LensSpecification",
    0xA433: "LensMake",
    0xA434: "LensModel",
    0xA435: "LensSerialNumber",
}

# Pointer tags describe layout, not content.
STRUCTURAL_EXIF_TAGS = frozenset({"ExifOffset", "GPSInfo", "InteropOffset"})

# (struct code, byte size) per TIFF field type
_TIFF_TYPES = {
    1: ("B", 1),   # BYTE
    2: ("s", 1),   # ASCII
    3: ("H", 2),   # SHORT
    4: ("I", 4),   # LONG
    5: ("II", 8),  # RATIONAL
    6: ("b", 1),   # SBYTE
    7: ("x", 1),   # UNDEFINED
    8: ("h", 2),   # SSHORT
    9: ("i", 4),   # SLONG
    10: ("ii", 8),  # SRATIONAL
    11: ("f", 4),  # FLOAT
    12: ("d", 8),  # DOUBLE
}


@dataclass(frozen=True)
class JpegSummary:
    width: int
    height: int
    quant_tables: Mapping[int, tuple[int, ...]]
    progressive: bool = False
    exif_present: bool = False
    exif_fields: Mapping[str, str] = field(default_factory=dict)
    exif_tag_count: int = 0
    iptc_present: bool = False
    iptc_digest: bytes | None = None
    xmp_present: bool = False
    xmp_original_document_id: str | None = None
    xmp_preserved_filename: str | None = None
    xmp_digest: bytes | None = None
    warnings: tuple[str, ...] = ()

    @property
    def max_dim(self) -> int:
        return max(self.width, self.height)

    def content_tags(self) -> set[str]:
        """Exif tag names excluding IFD pointer tags."""
        return set(self.exif_fields) - STRUCTURAL_EXIF_TAGS

    def to_dict(self) -> dict:
        return {
            "width": self.width,
            "height": self.height,
            "progressive": self.progressive,
            "quant_tables": {str(k): list(v) for k, v in sorted(self.quant_tables.items())},
            "exif_present": self.exif_present,
            "exif_tag_count": self.exif_tag_count,
            "exif_fields": dict(sorted(self.exif_fields.items())),
            "iptc_present": self.iptc_present,
            "iptc_digest": self.iptc_digest.hex() if self.iptc_digest is not None else None,
            "xmp_present": self.xmp_present,
            "xmp_original_document_id": self.xmp_original_document_id,
            "xmp_preserved_filename": self.xmp_preserved_filename,
        }


def compute_iptc_digest(iptc_block: bytes) -> bytes:
    """MD5 of the raw IPTC-IIM payload (Photoshop resource 0x0404)."""
    return hashlib.md5(bytes(iptc_block)).digest()


def quant_similarity(tables_a: Mapping[int, tuple[int, ...]],
                     tables_b: Mapping[int, tuple[int, ...]]) -> float:
    """Mean relative error of `tables_b` against the reference `tables_a`.

    The mean runs over every coefficient of every table id present in both
    sets. The measure is not symmetric: the first argument is the divisor.
    """
    shared = sorted(set(tables_a) & set(tables_b))
    if not shared:
        raise MismatchedTables(
            f"no common table id ({sorted(tables_a)} vs {sorted(tables_b)})")
    terms = []
    for tid in shared:
        a, b = tables_a[tid], tables_b[tid]
        if len(a) != 64 or len(b) != 64:
            raise MismatchedTables(f"table {tid} does not have 64 coefficients")
        terms.extend(abs(ref - other) / ref for ref, other in zip(a, b))
    # fsum keeps uniform tables exact, so 100 vs 102 lands on 0.02 itself
    return math.fsum(terms) / len(terms)


def parse_jpeg(data: bytes) -> JpegSummary:
    """Parse the marker structure of a JPEG byte stream.

    Raises MalformedJpeg when there is no SOI, a segment runs past the end
    of the buffer, the coding process is unsupported (arithmetic, lossless,
    hierarchical), or no frame header precedes EOI.
    """
    data = bytes(data)
    n = len(data)
    if n < 2 or data[0] != 0xFF or data[1] != 0xD8:
        raise MalformedJpeg("missing SOI marker")

    frame: tuple[int, int, bool] | None = None
    tables: dict[int, tuple[int, ...]] = {}
    exif_payload: bytes | None = None
    xmp_packet: bytes | None = None
    photoshop = bytearray()
    seen_scan = False
    warnings: list[str] = []

    pos = 2
    while True:
        if seen_scan:
            pos = _skip_entropy_data(data, pos)
            if pos >= n:
                # Trailing scan data without EOI; headers were complete.
                break
        if pos >= n:
            raise MalformedJpeg("stream ends before EOI")
        if data[pos] != 0xFF:
            raise MalformedJpeg(f"expected marker at offset {pos}")
        while pos < n and data[pos] == 0xFF:
            pos += 1
        if pos >= n:
            raise MalformedJpeg("stream ends inside marker fill")
        marker = data[pos]
        pos += 1

        if marker == 0xD9:  # EOI
            break
        if marker == 0xD8:
            raise MalformedJpeg("unexpected second SOI")
        if marker in _STANDALONE:
            continue

        if pos + 2 > n:
            raise MalformedJpeg(f"truncated length field for marker 0xFF{marker:02X}")
        length = (data[pos] << 8) | data[pos + 1]
        if length < 2:
            raise MalformedJpeg(f"invalid segment length {length}")
        if pos + length > n:
            raise MalformedJpeg(
                f"segment 0xFF{marker:02X} declares {length} bytes, "
                f"{n - pos} available")
        payload = data[pos + 2:pos + length]
        pos += length

        if marker in _SOF_HUFFMAN:
            if frame is not None:
                raise MalformedJpeg("more than one frame header")
            frame = _parse_sof(payload, progressive=_SOF_HUFFMAN[marker])
        elif marker in _SOF_OTHER:
            raise MalformedJpeg(f"unsupported coding process (SOF 0xFF{marker:02X})")
        elif marker == 0xDB:
            tables.update(_parse_dqt(payload))
        elif marker == 0xE1:
            if payload.startswith(_EXIF_HEADER) and exif_payload is None:
                exif_payload = payload[len(_EXIF_HEADER):]
            elif payload.startswith(_XMP_HEADER) and xmp_packet is None:
                xmp_packet = payload[len(_XMP_HEADER):]
        elif marker == 0xED:
            if payload.startswith(_PHOTOSHOP_HEADER):
                photoshop += payload[len(_PHOTOSHOP_HEADER):]
        elif marker == 0xDA:
            if frame is None:
                raise MalformedJpeg("scan before frame header")
            seen_scan = True

    if frame is None:
        raise MalformedJpeg("no frame header before EOI")
    width, height, progressive = frame

    exif_fields: dict[str, str] = {}
    exif_count = 0
    if exif_payload is not None:
        exif_fields, exif_count = _parse_exif(exif_payload, warnings)

    iptc_block = _find_iptc_block(bytes(photoshop), warnings) if photoshop else None

    doc_id = preserved = None
    if xmp_packet is not None:
        doc_id, preserved = _parse_xmp(xmp_packet)

    return JpegSummary(
        width=width,
        height=height,
        quant_tables=dict(sorted(tables.items())),
        progressive=progressive,
        exif_present=exif_payload is not None,
        exif_fields=exif_fields,
        exif_tag_count=exif_count,
        iptc_present=iptc_block is not None,
        iptc_digest=compute_iptc_digest(iptc_block) if iptc_block is not None else None,
        xmp_present=xmp_packet is not None,
        xmp_original_document_id=doc_id,
        xmp_preserved_filename=preserved,
        xmp_digest=hashlib.md5(xmp_packet).digest() if xmp_packet is not None else None,
        warnings=tuple(warnings),
    )


def _skip_entropy_data(data: bytes, pos: int) -> int:
    # Stuffed 0xFF00 and RSTn belong to the scan; any other marker ends it.
    n = len(data)
    while True:
        pos = data.find(b"\xff", pos)
        if pos < 0 or pos + 1 >= n:
            return n
        nxt = data[pos + 1]
        if nxt == 0x00 or 0xD0 <= nxt <= 0xD7 or nxt == 0xFF:
            pos += 1
            continue
        return pos


def _parse_sof(payload: bytes, progressive: bool) -> tuple[int, int, bool]:
    if len(payload) < 6:
        raise MalformedJpeg("frame header too short")
    height, width = struct.unpack(">HH", payload[1:5])
    ncomp = payload[5]
    if len(payload) < 6 + 3 * ncomp:
        raise MalformedJpeg("frame header truncated")
    if width == 0 or height == 0:
        raise MalformedJpeg(f"invalid frame dimensions {width}x{height}")
    return width, height, progressive


def _parse_dqt(payload: bytes) -> dict[int, tuple[int, ...]]:
    out: dict[int, tuple[int, ...]] = {}
    pos = 0
    while pos < len(payload):
        precision, table_id = payload[pos] >> 4, payload[pos] & 0x0F
        pos += 1
        if precision > 1 or table_id > 3:
            raise MalformedJpeg(f"bad DQT table spec (Pq={precision}, Tq={table_id})")
        size = 128 if precision else 64
        if pos + size > len(payload):
            raise MalformedJpeg("DQT table truncated")
        zz = struct.unpack(">64H" if precision else "64B", payload[pos:pos + size])
        pos += size
        if min(zz) < 1:
            raise MalformedJpeg(f"DQT table {table_id} has a zero coefficient")
        natural = [0] * 64
        for i, v in enumerate(zz):
            natural[ZIGZAG[i]] = v
        out[table_id] = tuple(natural)
    return out


class _ExifError(Exception):
    pass


def _parse_exif(tiff: bytes, warnings: list[str]) -> tuple[dict[str, str], int]:
    fields: dict[str, str] = {}
    count = 0
    if len(tiff) < 8 or tiff[:2] not in (b"II", b"MM"):
        warnings.append("exif: bad TIFF header")
        return fields, count
    endian = "<" if tiff[:2] == b"II" else ">"
    magic, ifd0 = struct.unpack(endian + "HI", tiff[2:8])
    if magic != 42:
        warnings.append("exif: bad TIFF magic")
        return fields, count

    visited: set[int] = set()
    pending = [(ifd0, 1)]
    while pending:
        offset, depth = pending.pop(0)
        if offset in visited or depth > 2:
            continue
        visited.add(offset)
        try:
            for tag, value, raw in _read_ifd(tiff, offset, endian):
                count += 1
                fields[EXIF_TAG_NAMES.get(tag, f"Tag0x{tag:04X}")] = value
                if tag == _EXIF_IFD_POINTER and isinstance(raw, int):
                    pending.append((raw, depth + 1))
        except _ExifError as exc:
            warnings.append(f"exif: {exc}")
    return fields, count


def _read_ifd(tiff: bytes, offset: int, endian: str):
    if offset + 2 > len(tiff):
        raise _ExifError(f"IFD offset {offset} out of range")
    (nentries,) = struct.unpack(endian + "H", tiff[offset:offset + 2])
    if nentries > _MAX_IFD_ENTRIES:
        raise _ExifError(f"IFD declares {nentries} entries")
    pos = offset + 2
    if pos + 12 * nentries > len(tiff):
        raise _ExifError("IFD entries truncated")
    for _ in range(nentries):
        tag, typ, cnt = struct.unpack(endian + "HHI", tiff[pos:pos + 8])
        value_field = tiff[pos + 8:pos + 12]
        pos += 12
        if typ not in _TIFF_TYPES:
            yield tag, f"<type {typ}>", None
            continue
        code, size = _TIFF_TYPES[typ]
        nbytes = size * cnt
        if nbytes <= 4:
            blob = value_field[:nbytes]
        else:
            (voff,) = struct.unpack(endian + "I", value_field)
            if voff + nbytes > len(tiff):
                yield tag, "<out of range>", None
                continue
            blob = tiff[voff:voff + nbytes]
        yield (tag, *_format_value(typ, code, cnt, blob, endian))


def _format_value(typ: int, code: str, cnt: int, blob: bytes, endian: str):
    if typ == 2:
        text = blob.split(b"\x00", 1)[0].decode("utf-8", "replace").strip()
        return text, text
    if typ == 7:
        if cnt <= 16:
            return blob.hex(), blob
        return f"<{cnt} bytes>", blob
    if typ in (5, 10):
        nums = struct.unpack(endian + code * cnt, blob)
        parts = [f"{nums[i]}/{nums[i + 1]}" for i in range(0, len(nums), 2)]
        return " ".join(parts[:16]), None
    values = struct.unpack(endian + code * cnt, blob)
    text = " ".join(str(v) for v in values[:16])
    return text, values[0] if len(values) == 1 else None


def _find_iptc_block(resources: bytes, warnings: list[str]) -> bytes | None:
    pos = 0
    n = len(resources)
    while pos + 12 <= n:
        if resources[pos:pos + 4] != b"8BIM":
            warnings.append(f"photoshop: bad resource signature at {pos}")
            return None
        (res_id,) = struct.unpack(">H", resources[pos + 4:pos + 6])
        name_len = resources[pos + 6]
        name_total = name_len + 1
        name_total += name_total & 1
        size_at = pos + 6 + name_total
        if size_at + 4 > n:
            break
        (size,) = struct.unpack(">I", resources[size_at:size_at + 4])
        start = size_at + 4
        if start + size > n:
            warnings.append(f"photoshop: resource 0x{res_id:04X} truncated")
            return None
        if res_id == _IPTC_RESOURCE:
            return resources[start:start + size]
        pos = start + size + (size & 1)
    return None


_XMP_ATTR_RE = {
    name: re.compile(
        rf"xmpMM:{name}\s*=\s*[\"']([^\"']*)[\"']|<xmpMM:{name}>([^<]*)</xmpMM:{name}>")
    for name in ("OriginalDocumentID", "PreservedFileName")
}


def _parse_xmp(packet: bytes) -> tuple[str | None, str | None]:
    found: dict[str, str] = {}
    try:
        root = ET.fromstring(packet.strip(b"\x00 \r\n\t"))
    except ET.ParseError:
        text = packet.decode("utf-8", "replace")
        for name, rx in _XMP_ATTR_RE.items():
            m = rx.search(text)
            if m:
                found[name] = (m.group(1) if m.group(1) is not None else m.group(2)).strip()
    else:
        for elem in root.iter():
            for name in ("OriginalDocumentID", "PreservedFileName"):
                key = f"{{{_XMP_MM}}}{name}"
                if name in found:
                    continue
                if key in elem.attrib:
                    found[name] = elem.attrib[key].strip()
                elif elem.tag == key and elem.text:
                    found[name] = elem.text.strip()
    return found.get("OriginalDocumentID"), found.get("PreservedFileName")
