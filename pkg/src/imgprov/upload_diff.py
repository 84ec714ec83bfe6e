"""Before/after comparison of an image and its downloaded copy."""

from __future__ import annotations

from dataclasses import dataclass

from .jpeg_meta import JpegSummary, MismatchedTables, quant_similarity
from .naming import parse_facebook_name, parse_flickr_name

__all__ = ["DiffReport", "diff", "filename_relation"]


@dataclass(frozen=True)
class DiffReport:
    exif_removed: tuple[str, ...]
    exif_added: tuple[str, ...]
    exif_changed: tuple[str, ...]
    iptc_changed: bool
    xmp_changed: bool
    resolution_changed: tuple[tuple[int, int], tuple[int, int]] | None
    quant_error: float | None
    filename_relation: str

    @property
    def is_empty(self) -> bool:
        return (not (self.exif_removed or self.exif_added or self.exif_changed)
                and not self.iptc_changed and not self.xmp_changed
                and self.resolution_changed is None
                and not self.quant_error
                and self.filename_relation == "unchanged")

    def to_dict(self) -> dict:
        return {
            "exif_removed": list(self.exif_removed),
            "exif_added": list(self.exif_added),
            "exif_changed": list(self.exif_changed),
            "iptc_changed": self.iptc_changed,
            "xmp_changed": self.xmp_changed,
            "resolution_changed": (None if self.resolution_changed is None
                                   else [list(d) for d in self.resolution_changed]),
            "quant_error": self.quant_error,
            "filename_relation": self.filename_relation,
        }


def filename_relation(before_name: str | None, after_name: str | None) -> str:
    if before_name == after_name:
        return "unchanged"
    if after_name:
        if parse_facebook_name(after_name) is not None:
            return "facebook_pattern"
        if parse_flickr_name(after_name):
            return "flickr_pattern"
    return "other"


def _xmp_state(meta: JpegSummary):
    return (meta.xmp_present, meta.xmp_original_document_id,
            meta.xmp_preserved_filename, meta.xmp_digest)


def diff(before: JpegSummary, after: JpegSummary, *,
         before_name: str | None = None, after_name: str | None = None) -> DiffReport:
    """Compare metadata, dimensions, compression and naming of two files."""
    b_fields, a_fields = before.exif_fields, after.exif_fields
    removed = tuple(sorted(set(b_fields) - set(a_fields)))
    added = tuple(sorted(set(a_fields) - set(b_fields)))
    changed = tuple(sorted(t for t in set(b_fields) & set(a_fields)
                           if b_fields[t] != a_fields[t]))

    dims_before = (before.width, before.height)
    dims_after = (after.width, after.height)

    quant_error = None
    if before.quant_tables and after.quant_tables:
        try:
            quant_error = quant_similarity(before.quant_tables, after.quant_tables)
        except MismatchedTables:
            quant_error = None

    return DiffReport(
        exif_removed=removed,
        exif_added=added,
        exif_changed=changed,
        iptc_changed=before.iptc_digest != after.iptc_digest,
        xmp_changed=_xmp_state(before) != _xmp_state(after),
        resolution_changed=None if dims_before == dims_after else (dims_before, dims_after),
        quant_error=quant_error,
        filename_relation=filename_relation(before_name, after_name),
    )
