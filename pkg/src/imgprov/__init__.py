"""Platform provenance analysis for images downloaded from social media."""

__version__ = "0.1.0"

from .fbid import candidate_fbids, factor_of, recover_fbid
from .flickr_time import (Anchor, AnchorIndex, estimate_upload_date, load_index,
                          plan_crawl, save_index)
from .jpeg_meta import JpegSummary, MalformedJpeg, parse_jpeg, quant_similarity
from .naming import classify_filename, parse_facebook_name, parse_flickr_name
from .provenance import classify_platform, extract_signals
from .upload_diff import diff

__all__ = [
    "Anchor",
    "AnchorIndex",
    "JpegSummary",
    "MalformedJpeg",
    "candidate_fbids",
    "classify_filename",
    "classify_platform",
    "diff",
    "estimate_upload_date",
    "extract_signals",
    "factor_of",
    "load_index",
    "parse_facebook_name",
    "parse_flickr_name",
    "parse_jpeg",
    "plan_crawl",
    "quant_similarity",
    "recover_fbid",
    "save_index",
]
