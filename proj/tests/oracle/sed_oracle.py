#!/usr/bin/env python3
# Copyright (c) 2026 The sednas Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Brute-force SED reference used to freeze the fixture values in
tests/oracle/sed_fixtures.hpp.

Every block is written out as plain numbers; nothing here shares code with
the C++ scorer. Run: python3 tests/oracle/sed_oracle.py
"""
import math
from fractions import Fraction


def sig(x):
    return 1.0 / (1.0 + math.exp(-x))


def ceil_div(a, b):
    return -(-a // b)


def kernel_ge_pool(k, pool, stride):
    # k = (kw, kh), pool = (ow, oh), stride = (s1, s2)
    return k[0] >= ceil_div(pool[0], stride[0]) and k[1] >= ceil_div(pool[1], stride[1])


def block_terms(blk, space):
    """blk: dict with kernels {(kw,kh): count}, pools {name: count}, skip, none, other,
    c_out, f_in, f_out, pool_stride. space: dict has_skip, largest_pool or None."""
    o1 = space["largest_pool"]
    stride = blk.get("pool_stride", (1, 1))
    if o1 is None:
        dom = {k: True for k in blk["kernels"]}
    else:
        dom = {k: kernel_ge_pool(k, o1, stride) for k in blk["kernels"]}

    n_skip = blk.get("skip", 0)
    skip_sed = sig(n_skip) * n_skip

    conv_sed = 0.0
    for k, cnt in blk["kernels"].items():
        if dom[k]:
            conv_sed += sig(blk["c_out"]) * cnt

    d = sum(cnt for k, cnt in blk["kernels"].items() if dom[k])
    t = (sum(blk["kernels"].values()) + sum(blk["pools"].values())
         + n_skip + blk.get("none", 0) + blk.get("other", 0))
    s = sum(blk["pools"].values()) + sum(cnt for k, cnt in blk["kernels"].items() if not dom[k])
    pool_sed = float(d * d + t * t - s * s)

    if not space["has_skip"]:
        skip_sed = 1.0
    if o1 is None:
        pool_sed = 1.0

    ratio = sig(blk["c_out"]) * blk["f_in"] / blk["f_out"]
    score = ratio * pool_sed * sig(skip_sed * conv_sed)
    return skip_sed, conv_sed, pool_sed, ratio, score


TSS = {"has_skip": True, "largest_pool": (3, 3)}
NO_POOL = {"has_skip": True, "largest_pool": None}
NO_SKIP = {"has_skip": False, "largest_pool": (3, 3)}
DARTS = {"has_skip": True, "largest_pool": (3, 3)}

FIXTURES = [
    ("worked_example", TSS, dict(kernels={(3, 3): 2, (1, 1): 1}, pools={"avg": 1}, skip=1, none=1,
                                 c_out=16, f_in=1024, f_out=1024)),
    ("all_none", TSS, dict(kernels={}, pools={}, none=6, c_out=16, f_in=1024, f_out=1024)),
    ("empty_block", TSS, dict(kernels={}, pools={}, c_out=16, f_in=1024, f_out=1024)),
    ("all_suppressive", TSS, dict(kernels={(1, 1): 3}, pools={"avg": 3}, c_out=32, f_in=256, f_out=256)),
    ("all_conv3", TSS, dict(kernels={(3, 3): 6}, pools={}, c_out=64, f_in=64, f_out=64)),
    ("all_skip", TSS, dict(kernels={}, pools={}, skip=6, c_out=16, f_in=1024, f_out=1024)),
    ("downsampling_mix", TSS, dict(kernels={(3, 3): 1, (1, 1): 1}, pools={"avg": 2}, skip=2,
                                   c_out=32, f_in=1024, f_out=256)),
    ("no_pool_space", NO_POOL, dict(kernels={(3, 3): 2, (1, 1): 1}, pools={}, skip=1,
                                    c_out=16, f_in=1024, f_out=1024)),
    ("no_skip_space", NO_SKIP, dict(kernels={(5, 5): 2, (3, 3): 1}, pools={"max": 1},
                                    c_out=8, f_in=256, f_out=256)),
    ("reduce_stride2", DARTS, dict(kernels={(3, 3): 2, (5, 5): 1}, pools={"max": 2}, skip=2, other=1,
                                   c_out=72, f_in=1024, f_out=256, pool_stride=(2, 2))),
]


def main():
    for name, space, blk in FIXTURES:
        sk, cv, pl, ratio, score = block_terms(blk, space)
        print(f"{name:18s} skip={sk!r} conv={cv!r} pool={pl!r} ratio={ratio!r} sed={score!r}")
    # sanity: sig values quoted for single arguments
    for x in (0, 1, 2, 16):
        print(f"sig({x}) = {sig(x)!r}  {x}*sig({x}) = {x * sig(x)!r}")


if __name__ == "__main__":
    main()
