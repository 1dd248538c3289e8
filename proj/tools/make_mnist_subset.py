#!/usr/bin/env python3
"""Build a small MNIST train/test pair in IDX format from the 5000-sample
digit subset that ships inside the ``mlxtend`` wheel.

The subset holds 500 images per digit taken from the canonical MNIST
training file. The first 400 images of every digit become the training
file and the remaining 100 the test file, so both files carry all ten
classes. Output files are gzip-compressed IDX (the same layout as the
official distribution) with a fixed gzip mtime so reruns are byte-identical.

Usage:
    tools/make_mnist_subset.py [--wheel PATH] [--out DIR]

Without ``--wheel`` the script runs ``pip download mlxtend`` into a
temporary directory.
"""

import argparse
import glob
import gzip
import os
import struct
import subprocess
import sys
import tempfile
import zipfile

TRAIN_PER_CLASS = 400
MEMBER = "mlxtend/data/data/mnist_5k.csv.gz"


def fetch_wheel(tmp):
    subprocess.run(
        [sys.executable, "-m", "pip", "download", "--no-deps", "mlxtend", "-d", tmp],
        check=True,
    )
    wheels = glob.glob(f"{tmp}/mlxtend-*.whl")
    if not wheels:
        sys.exit("pip download did not produce an mlxtend wheel")
    return wheels[0]


def write_gz(path, payload):
    with open(path, "wb") as raw:
        with gzip.GzipFile(fileobj=raw, mode="wb", mtime=0, filename="") as gz:
            gz.write(payload)


def idx_images(rows):
    header = struct.pack(">IIII", 0x00000803, len(rows), 28, 28)
    return header + b"".join(bytes(r) for r in rows)


def idx_labels(labels):
    return struct.pack(">II", 0x00000801, len(labels)) + bytes(labels)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--wheel", help="path to an mlxtend wheel")
    ap.add_argument("--out", default="data/mnist-5k", help="output directory")
    args = ap.parse_args()

    with tempfile.TemporaryDirectory() as tmp:
        wheel = args.wheel or fetch_wheel(tmp)
        with zipfile.ZipFile(wheel) as z:
            text = gzip.decompress(z.read(MEMBER)).decode()

    seen = {}
    train, test = ([], []), ([], [])
    for line in text.splitlines():
        cells = line.split(",")
        pixels = [int(float(c)) for c in cells[:-1]]
        label = int(float(cells[-1]))
        if len(pixels) != 784 or not 0 <= label <= 9:
            sys.exit(f"unexpected row shape/label: {len(pixels)} {label}")
        n = seen.get(label, 0)
        seen[label] = n + 1
        part = train if n < TRAIN_PER_CLASS else test
        part[0].append(pixels)
        part[1].append(label)

    os.makedirs(args.out, exist_ok=True)
    for name, (imgs, labels) in (("train", train), ("t10k", test)):
        write_gz(f"{args.out}/{name}-images-idx3-ubyte.gz", idx_images(imgs))
        write_gz(f"{args.out}/{name}-labels-idx1-ubyte.gz", idx_labels(labels))
        print(f"{name}: {len(labels)} images")


if __name__ == "__main__":
    main()
