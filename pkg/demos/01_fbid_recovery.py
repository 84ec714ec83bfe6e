"""Recover a Facebook photo ID (fbid) from a downloaded filename.

A downloaded Facebook photo is named ``xx_yy_zz_n.jpg``. The photo's own
fbid is ``yy + k * 3333333`` for some small ``k``, so listing 65 candidates
and checking each one locates the photo page. This demo stays offline and
uses a stand-in verifier in place of facebook.com.
"""

from imgprov import candidate_fbids, parse_facebook_name, recover_fbid
from imgprov.netprobe import facebook_photo_url

name = "280372071_130119036289081_1523944611184590851_n.jpeg"
parsed = parse_facebook_name(name)
print(f"{name}\n  era={parsed.era.value} yy={parsed.yy}")

cset = candidate_fbids(int(parsed.yy))
for k in range(4):
    print(f"  k={k:2d}  {facebook_photo_url(cset.candidates[k])}")
print(f"  ... {len(cset.candidates)} candidates in total")

# Pretend only one of the candidate pages exists.
real = 130119042955747
recovery = recover_fbid(int(parsed.yy), lambda c: "exists" if c == real else "not_found")
print(f"recovered fbid {recovery.fbid} at k={recovery.factor} after {recovery.probes} probes")
