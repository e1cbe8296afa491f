#!/usr/bin/env python3
"""Pixel-arithmetic oracle for the committed render goldens.

A pixel is black when its open box meets the open box of some kept depth-m
cell.  Independent of the C++ rasterizer; run from the repo root:

    python3 tools/gen_render_goldens.py tests/golden
"""
import itertools
import os
import sys

CASES = {
    # name: (n, kept digits of the single periodic level, m, width, height)
    "full_m1_16": ((2, 2), None, 1, 16, 16),
    "full_m2_16": ((2, 2), None, 2, 16, 16),
    "full_m3_16": ((2, 2), None, 3, 16, 16),
    "full3_m2_10": ((3, 3), None, 2, 10, 10),
    "cantor_m1_81": ((3, 3), {(0, 0), (0, 2), (2, 0), (2, 2)}, 1, 81, 81),
    "cantor_m2_81": ((3, 3), {(0, 0), (0, 2), (2, 0), (2, 2)}, 2, 81, 81),
    "cantor_m3_81": ((3, 3), {(0, 0), (0, 2), (2, 0), (2, 2)}, 3, 81, 81),
    "cantor_m2_20x13": ((3, 3), {(0, 0), (0, 2), (2, 0), (2, 2)}, 2, 20, 13),
    "cantorxfull_m1_9": ((3, 3), {(0, 0), (0, 1), (0, 2), (2, 0), (2, 1), (2, 2)}, 1, 9, 9),
}


def kept(a, n, m, digits):
    # base-n digits of the cell coordinate, most significant first
    for _ in range(m):
        d = tuple(x % b for x, b in zip(a, n))
        if digits is not None and d not in digits:
            return False
        a = tuple(x // b for x, b in zip(a, n))
    return True


def overlaps(a, cells, p, pixels):
    # open (a/cells, (a+1)/cells) against open (p/pixels, (p+1)/pixels)
    return a * pixels < (p + 1) * cells and (a + 1) * pixels > p * cells


def render(n, digits, m, w, h):
    nx, ny = n[0] ** m, n[1] ** m
    on = [[False] * w for _ in range(h)]
    for ax, ay in itertools.product(range(nx), range(ny)):
        if not kept((ax, ay), n, m, digits):
            continue
        for py in range(h):
            row = h - 1 - py  # y grows upwards
            if not overlaps(ay, ny, row, h):
                continue
            for px in range(w):
                if overlaps(ax, nx, px, w):
                    on[py][px] = True
    body = bytearray()
    for row in on:
        for v in row:
            body += b"\x00\x00\x00" if v else b"\xff\xff\xff"
    return b"P6\n%d %d\n255\n" % (w, h) + bytes(body)


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "tests/golden"
    os.makedirs(out, exist_ok=True)
    for name, (n, digits, m, w, h) in CASES.items():
        with open(os.path.join(out, name + ".ppm"), "wb") as f:
            f.write(render(n, digits, m, w, h))


if __name__ == "__main__":
    main()
