"""Parse Flickr download names and estimate an upload date from the photo ID.

Flickr IDs are issued sequentially, so the dates of nearby public photos
bound the upload date of a private or deleted one.
"""

import datetime as dt
import random

from imgprov import parse_flickr_name
from imgprov.flickr_time import Anchor, AnchorIndex, estimate_upload_date, plan_crawl

for name in ("r05d9d749t_52027420848_o.jpg", "52027420848_r05d9d749t_o.jpg",
             "52027420848_4efc66e8a4_o.jpg"):
    for h in parse_flickr_name(name):
        print(f"{name:34s} {h.layout.value:9s} id={h.photo_id} companion={h.companion} "
              f"({h.confidence})")

# A synthetic neighbourhood: most public photos were uploaded on one day,
# a handful carry stray dates (for example photos backdated by their owner).
rng = random.Random(1)
ids = sorted(rng.sample(range(52026001712, 52026004713), 1000))
anchors = [Anchor(i, "public", date=dt.date(2022, 4, 24)) for i in ids]
anchors += [Anchor(52026002941, "public", date=dt.date(2022, 4, 23))]
index = AnchorIndex(anchors)

est = estimate_upload_date(52026002941, index, k=50)
print(f"\nestimate for 52026002941: {est.date} "
      f"(confidence {est.confidence:.2f}, {est.support}/{est.consulted} anchors agree)")

print("next IDs a crawl would probe around 52027420848:",
      plan_crawl(52027420848, window=3, index=index))
