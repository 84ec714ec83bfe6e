"""Facebook and Flickr download filename conventions.

Facebook (current)   xx_yy_zz_n[_aa].jpg     aa = fbid, dropped by "Save As"
Facebook (pre-2012)  aa_bb_cc_dd_ee_n.jpg
Flickr               <filename>_<id>_o.jpg   logged in, Android/PC
                     <id>_<filename>_o.jpg   logged in, iOS
                     <id>_<secret>_o.jpg     logged out

Both parsers work on the bare filename and keep every token verbatim so a
parse can be serialized back to the exact input.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field

__all__ = [
    "FacebookEra",
    "FacebookName",
    "FlickrLayout",
    "FlickrName",
    "NameVerdict",
    "classify_filename",
    "parse_facebook_name",
    "parse_flickr_name",
]

ACCEPTED_EXTENSIONS = frozenset({"jpg", "jpeg"})
FLICKR_ID_MIN_DIGITS = 10
FLICKR_ID_MAX_DIGITS = 12

_ASCII_DIGITS = re.compile(r"[0-9]+")
_FLICKR_SECRET = re.compile(r"[0-9a-f]{10}")


def _is_number(token: str) -> bool:
    return _ASCII_DIGITS.fullmatch(token) is not None


def _split_name(name: str, extensions=ACCEPTED_EXTENSIONS) -> tuple[str, str] | None:
    if "/" in name or "\\" in name:
        raise ValueError(f"expected a bare filename, got {name!r}")
    stem, dot, ext = name.rpartition(".")
    if not dot or not stem or ext.lower() not in extensions:
        return None
    return stem, ext


class FacebookEra(str, enum.Enum):
    LEGACY5 = "Legacy5"
    THREE_NUMBER = "ThreeNumber"
    MODERN = "Modern"


@dataclass(frozen=True)
class FacebookName:
    era: FacebookEra
    extension: str
    xx: str | None = None
    yy: str | None = None
    zz: str | None = None
    aa_fbid: str | None = None
    legacy_parts: tuple[str, ...] = ()
    n_token: str = "n"
    # A three-number stem may also be the 2012 aa_bb_ee_n layout.
    maybe_three_number_legacy: bool = False

    @property
    def stem(self) -> str:
        if self.era is FacebookEra.LEGACY5:
            parts = [*self.legacy_parts, self.n_token]
        else:
            parts = [self.xx, self.yy, self.zz, self.n_token]
            if self.aa_fbid is not None:
                parts.append(self.aa_fbid)
        return "_".join(parts)

    @property
    def filename(self) -> str:
        return f"{self.stem}.{self.extension}"

    def to_dict(self) -> dict:
        return {
            "era": self.era.value,
            "xx": self.xx,
            "yy": self.yy,
            "zz": self.zz,
            "aa_fbid": self.aa_fbid,
            "legacy_parts": list(self.legacy_parts),
            "extension": self.extension,
            "maybe_three_number_legacy": self.maybe_three_number_legacy,
        }


def parse_facebook_name(name: str) -> FacebookName | None:
    """Parse a Facebook download filename; None when it does not fit."""
    split = _split_name(name)
    if split is None:
        return None
    stem, ext = split
    tokens = stem.split("_")

    if len(tokens) == 6 and tokens[5] == "n" and all(map(_is_number, tokens[:5])):
        return FacebookName(era=FacebookEra.LEGACY5, extension=ext,
                            legacy_parts=tuple(tokens[:5]))

    if len(tokens) in (4, 5) and tokens[3] == "n" and all(map(_is_number, tokens[:3])):
        fbid = None
        if len(tokens) == 5:
            if not _is_number(tokens[4]):
                return None
            fbid = tokens[4]
        return FacebookName(
            era=FacebookEra.MODERN, extension=ext,
            xx=tokens[0], yy=tokens[1], zz=tokens[2], aa_fbid=fbid,
            maybe_three_number_legacy=fbid is None,
        )
    return None


class FlickrLayout(str, enum.Enum):
    PREFIX_ID = "PrefixId"    # filename_identifier_o
    ID_PREFIX = "IdPrefix"    # identifier_filename_o
    ID_SECRET = "IdSecret"    # identifier_secret_o


@dataclass(frozen=True)
class FlickrName:
    photo_id: str
    companion: str
    layout: FlickrLayout
    extension: str
    suffix_o: bool = True
    confidence: str = "certain"

    @property
    def stem(self) -> str:
        if self.layout is FlickrLayout.PREFIX_ID:
            return f"{self.companion}_{self.photo_id}_o"
        return f"{self.photo_id}_{self.companion}_o"

    @property
    def filename(self) -> str:
        return f"{self.stem}.{self.extension}"

    def to_dict(self) -> dict:
        return {
            "layout": self.layout.value,
            "photo_id": self.photo_id,
            "companion": self.companion,
            "extension": self.extension,
            "confidence": self.confidence,
        }


def is_plausible_flickr_id(token: str, max_digits: int = FLICKR_ID_MAX_DIGITS) -> bool:
    return _is_number(token) and FLICKR_ID_MIN_DIGITS <= len(token) <= max_digits


def parse_flickr_name(name: str, max_id_digits: int = FLICKR_ID_MAX_DIGITS) -> list[FlickrName]:
    """Return every Flickr layout that explains `name`, most plausible first.

    A single explanation is marked "certain". When several layouts fit (a
    numeric original filename next to the ID, or a 10-character hex
    original filename that looks like a secret) all of them are returned
    marked "ambiguous".
    """
    split = _split_name(name)
    if split is None:
        return []
    stem, ext = split
    tokens = stem.split("_")
    if len(tokens) < 3 or tokens[-1] != "o":
        return []
    body = tokens[:-1]

    found: list[tuple[FlickrLayout, str, str]] = []
    first, last = body[0], body[-1]
    if len(body) == 2 and is_plausible_flickr_id(first, max_id_digits) \
            and _FLICKR_SECRET.fullmatch(last):
        found.append((FlickrLayout.ID_SECRET, first, last))
    if is_plausible_flickr_id(last, max_id_digits):
        found.append((FlickrLayout.PREFIX_ID, last, "_".join(body[:-1])))
    if is_plausible_flickr_id(first, max_id_digits):
        found.append((FlickrLayout.ID_PREFIX, first, "_".join(body[1:])))

    found = [f for f in found if f[2]]
    confidence = "certain" if len(found) == 1 else "ambiguous"
    return [FlickrName(photo_id=pid, companion=comp, layout=layout,
                       extension=ext, confidence=confidence)
            for layout, pid, comp in found]


@dataclass(frozen=True)
class NameVerdict:
    name: str
    facebook: FacebookName | None = None
    flickr: list[FlickrName] = field(default_factory=list)

    @property
    def generic_unchanged(self) -> bool:
        return self.facebook is None and not self.flickr

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "facebook": self.facebook.to_dict() if self.facebook else None,
            "flickr": [h.to_dict() for h in self.flickr],
            "generic_unchanged": self.generic_unchanged,
        }


def classify_filename(name: str) -> NameVerdict:
    return NameVerdict(name=name, facebook=parse_facebook_name(name),
                       flickr=parse_flickr_name(name))
