#!/usr/bin/env python3
"""Regenerate the 256x256 grayscale PGM fixtures in data/ from data/src originals.

Sources (cached under data/src/, provenance):
  cameraman.tif      classic 256x256 cameraman (npm package "cameraman" 1.0.0)
  lena512_gray.png   ITU-R 601 grayscale of the classic 512x512 RGB Lena
                     (npm package "lena" 1.0.0, base64 ndarray payload)
  baboon512_gray.png ITU-R 601 grayscale of the classic 512x512 RGB baboon
                     (npm package "baboon-image" 2.1.0)
Moon comes from scikit-image bundled data (CC0).

512 -> 256 reduction is a 2x2 block mean rounded half away from zero, matching
the writer used by the C++ tools.
"""
import os
import sys

import numpy as np
from PIL import Image

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SRC = os.path.join(ROOT, "data", "src")
OUT = os.path.join(ROOT, "data")


def write_pgm(path, a):
    a = np.asarray(a)
    assert a.dtype == np.uint8 and a.ndim == 2
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n255\n" % (a.shape[1], a.shape[0]))
        fh.write(a.tobytes())
    print("wrote", path, a.shape, "min/max/mean %d/%d/%.2f" % (a.min(), a.max(), a.mean()))


def block_mean_2x2(a):
    a = a.astype(np.float64)
    r = 0.25 * (a[0::2, 0::2] + a[0::2, 1::2] + a[1::2, 0::2] + a[1::2, 1::2])
    return np.floor(r + 0.5).astype(np.uint8)


def main():
    cam = np.array(Image.open(os.path.join(SRC, "cameraman.tif")))
    write_pgm(os.path.join(OUT, "cameraman.pgm"), cam)

    lena = np.array(Image.open(os.path.join(SRC, "lena512_gray.png")))
    write_pgm(os.path.join(OUT, "lena.pgm"), block_mean_2x2(lena))

    bab = np.array(Image.open(os.path.join(SRC, "baboon512_gray.png")))
    write_pgm(os.path.join(OUT, "texture.pgm"), block_mean_2x2(bab))

    try:
        from skimage import data

        moon = data.moon()
        write_pgm(os.path.join(OUT, "moon.pgm"), block_mean_2x2(moon))
    except Exception as exc:  # pragma: no cover
        print("skipping moon.pgm:", exc, file=sys.stderr)


if __name__ == "__main__":
    main()
