"""Rule-based platform attribution.

Each rule corresponds to one cell of the per-platform findings table
(Exif, IPTC, XMP, resolution, compression, file name). A rule that fires
adds its configured weight to one platform; the verdict ranks platforms by
total weight and lists the evidence behind every score.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from fractions import Fraction

from .config import default_config, reference_tables
from .jpeg_meta import JpegSummary, MismatchedTables, quant_similarity
from .naming import NameVerdict

__all__ = [
    "PLATFORMS",
    "RULES",
    "Evidence",
    "PlatformScore",
    "PlatformVerdict",
    "Rule",
    "SignalVector",
    "classify_platform",
    "extract_signals",
]

PLATFORMS = ("Facebook", "Flickr", "GooglePhotos", "Unknown")
_ARTIST_COPYRIGHT = frozenset({"Artist", "Copyright"})

_EXCLUSIVE = (
    ("exif_intact", "exif_absent", "exif_artist_copyright_only"),
    ("iptc_intact", "iptc_absent", "iptc_modified"),
    ("xmp_intact", "xmp_absent"),
)


@dataclass(frozen=True)
class SignalVector:
    exif_intact: bool = False
    exif_absent: bool = False
    exif_artist_copyright_only: bool = False
    iptc_intact: bool = False
    iptc_absent: bool = False
    iptc_modified: bool = False
    xmp_intact: bool = False
    xmp_absent: bool = False
    max_dim_eq_2048: bool = False
    quant_matches_facebook: bool = False
    name_facebook: bool = False
    name_flickr: bool = False
    name_unchanged_plausible: bool = False
    max_dim: int = 0
    quant_error: float | None = None

    def __post_init__(self):
        for group in _EXCLUSIVE:
            if sum(getattr(self, name) for name in group) > 1:
                raise ValueError(f"signals {group} are mutually exclusive")

    @classmethod
    def flag_names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls) if f.type in ("bool", bool))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Rule:
    rule_id: str
    platform: str
    signal: str
    weight_key: str
    finding: str


RULES = (
    Rule("facebook.filename", "Facebook", "name_facebook", "filename_match",
         "File name: renamed to the xx_yy_zz_n[_fbid] pattern"),
    Rule("facebook.exif", "Facebook", "exif_artist_copyright_only", "exif_artist_copyright_only",
         "Exif: all fields removed except Artist and Copyright"),
    Rule("facebook.exif_empty", "Facebook", "exif_absent", "exif_absent",
         "Exif: all fields removed (no Artist or Copyright to keep)"),
    Rule("facebook.iptc", "Facebook", "iptc_absent", "iptc_absent",
         "IPTC: removed from JPEG uploads"),
    Rule("facebook.xmp", "Facebook", "xmp_absent", "xmp_absent",
         "XMP: removed"),
    Rule("facebook.resolution", "Facebook", "max_dim_eq_2048", "max_dim_eq_2048",
         "Resolution: images larger than 2048 px resized to 2048 px"),
    Rule("facebook.compression", "Facebook", "quant_matches_facebook", "quant_matches_facebook",
         "Compression: recompressed with Facebook quantization tables"),
    Rule("flickr.filename", "Flickr", "name_flickr", "filename_match",
         "File name: renamed with the numeric photo ID and _o suffix"),
    Rule("googlephotos.exif", "GooglePhotos", "exif_intact", "exif_intact",
         "Exif: kept intact"),
    Rule("googlephotos.iptc", "GooglePhotos", "iptc_intact", "iptc_intact",
         "IPTC: kept unless re-compression is enabled"),
    Rule("googlephotos.iptc_modified", "GooglePhotos", "iptc_modified", "iptc_modified",
         "IPTC: modified when re-compression is enabled"),
    Rule("googlephotos.xmp", "GooglePhotos", "xmp_intact", "xmp_intact",
         "XMP: kept unless re-compression is enabled"),
    Rule("googlephotos.filename", "GooglePhotos", "name_unchanged_plausible", "name_unchanged",
         "File name: kept unchanged"),
    Rule("unknown.exif", "Unknown", "exif_intact", "exif_intact",
         "Exif: kept intact, as in a file never uploaded"),
)

_SUMMARIES = {
    "Facebook": "consistent with a Facebook download",
    "Flickr": "consistent with a Flickr download",
    "GooglePhotos": "consistent with Google Photos or no platform",
    "Unknown": "no platform fingerprint",
}


def extract_signals(meta: JpegSummary, names: NameVerdict, config: dict | None = None,
                    original: JpegSummary | None = None) -> SignalVector:
    """Derive rule inputs from a parsed file and its filename verdict.

    `original`, when known, lets IPTC be judged intact versus modified by
    digest; without it any IPTC block counts as intact.
    """
    cfg = config if config is not None else default_config()

    tags = meta.content_tags() if meta.exif_present else set()
    exif_absent = not tags
    ac_only = bool(tags) and tags <= _ARTIST_COPYRIGHT

    iptc_modified = (meta.iptc_present and original is not None
                     and original.iptc_digest != meta.iptc_digest)

    quant_error = None
    refs = reference_tables(cfg)
    if refs and meta.quant_tables:
        try:
            quant_error = quant_similarity(refs, meta.quant_tables)
        except MismatchedTables:
            quant_error = None

    return SignalVector(
        exif_intact=not exif_absent and not ac_only,
        exif_absent=exif_absent,
        exif_artist_copyright_only=ac_only,
        iptc_intact=meta.iptc_present and not iptc_modified,
        iptc_absent=not meta.iptc_present,
        iptc_modified=iptc_modified,
        xmp_intact=meta.xmp_present,
        xmp_absent=not meta.xmp_present,
        max_dim_eq_2048=meta.max_dim == cfg["resize_threshold"],
        quant_matches_facebook=quant_error is not None and quant_error < cfg["quant_threshold"],
        name_facebook=names.facebook is not None,
        name_flickr=bool(names.flickr),
        name_unchanged_plausible=names.generic_unchanged,
        max_dim=meta.max_dim,
        quant_error=quant_error,
    )


@dataclass(frozen=True)
class Evidence:
    rule: str
    weight: float
    finding: str


@dataclass(frozen=True)
class PlatformScore:
    platform: str
    score: float
    evidence: tuple[Evidence, ...]


@dataclass(frozen=True)
class PlatformVerdict:
    ranking: tuple[PlatformScore, ...]

    @property
    def top(self) -> str:
        return self.ranking[0].platform

    @property
    def tied(self) -> tuple[str, ...]:
        """Platforms sharing the top score; more than one means no clear winner."""
        best = self.ranking[0].score
        return tuple(s.platform for s in self.ranking if s.score == best)

    def rank_of(self, platform: str) -> int:
        return [s.platform for s in self.ranking].index(platform)

    @property
    def summary(self) -> str:
        if len(self.tied) > 1:
            return "inconclusive: equal scores for " + " / ".join(self.tied)
        return _SUMMARIES[self.top]

    def to_dict(self) -> dict:
        return {
            "top": self.top,
            "tied": list(self.tied),
            "summary": self.summary,
            "ranking": [
                {"platform": s.platform, "score": s.score,
                 "evidence": [asdict(e) for e in s.evidence]}
                for s in self.ranking
            ],
        }


def classify_platform(signals: SignalVector, config: dict | None = None) -> PlatformVerdict:
    """Rank platforms by the summed weight of the rules their signals fire.

    Ties keep the order Facebook, Flickr, GooglePhotos, Unknown. Unknown
    starts from a floor weight so that a vector with no signals ranks it
    first.
    """
    cfg = config if config is not None else default_config()
    weights = cfg["weights"]
    evidence: dict[str, list[Evidence]] = {p: [] for p in PLATFORMS}
    for rule in RULES:
        weight = weights[rule.weight_key]
        if getattr(signals, rule.signal) and weight > 0:
            evidence[rule.platform].append(Evidence(rule.rule_id, weight, rule.finding))
    floor = weights["unknown_floor"]
    if floor > 0:
        evidence["Unknown"].insert(0, Evidence("unknown.floor", floor,
                                               "Baseline: no fingerprint required"))

    # exact sums so equal evidence totals tie regardless of float rounding
    exact = {p: sum((Fraction(e.weight) for e in evidence[p]), Fraction(0)) for p in PLATFORMS}
    order = sorted(PLATFORMS, key=lambda p: (-exact[p], PLATFORMS.index(p)))
    return PlatformVerdict(tuple(
        PlatformScore(p, float(exact[p]), tuple(evidence[p])) for p in order))
