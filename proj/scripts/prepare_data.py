#!/usr/bin/env python3
"""Convert the public test images and the CIFAR-10 subset used by the
experiment drivers into the binary formats the CLI reads (PNM, CIFAR-10 .bin).

Sources (npm tarballs, extracted under --src):
  baboon-image/package/baboon.png        512x512 RGB
  cameraman/package/cameraman.png        256x256 grey
  tfjs-cifar10/package/data_batch_1.png  10000 rows x 1024 RGB pixels (HWC)
  tfjs-cifar10/package/test_batch.png
  tfjs-cifar10/package/{train,test}_lables.json

The ORL faces are not redistributable here, so a surrogate pair of classes is
cut from the scikit-image sample photos (astronaut, camera): three 112x92
crops per class at small offsets.
"""
import argparse
import json
import os

import numpy as np
from PIL import Image


def write_pnm(path, arr):
    arr = np.asarray(arr, dtype=np.uint8)
    if arr.ndim == 2:
        header = b"P5\n%d %d\n255\n" % (arr.shape[1], arr.shape[0])
    else:
        header = b"P6\n%d %d\n255\n" % (arr.shape[1], arr.shape[0])
    with open(path, "wb") as f:
        f.write(header)
        f.write(arr.tobytes())


def write_cifar(path, images, labels):
    # one label byte followed by the R, G and B planes (32x32 each)
    with open(path, "wb") as f:
        for img, lab in zip(images, labels):
            f.write(bytes([lab]))
            f.write(np.ascontiguousarray(img.transpose(2, 0, 1)).tobytes())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--src", required=True)
    ap.add_argument("--out", required=True)
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)

    baboon = np.asarray(Image.open(os.path.join(args.src, "baboon-image/package/baboon.png")).convert("RGB"))
    write_pnm(os.path.join(args.out, "baboon.ppm"), baboon)
    cam = np.asarray(Image.open(os.path.join(args.src, "cameraman/package/cameraman.png")).convert("L"))
    write_pnm(os.path.join(args.out, "cameraman.pgm"), cam)

    cifar = os.path.join(args.src, "tfjs-cifar10/package")
    for name, png, labels, count in (("cifar10_train36.bin", "data_batch_1.png", "train_lables.json", 36),
                                     ("cifar10_test25.bin", "test_batch.png", "test_lables.json", 25)):
        rows = np.asarray(Image.open(os.path.join(cifar, png)).convert("RGB"))[:count]
        imgs = rows.reshape(count, 32, 32, 3)
        labs = json.load(open(os.path.join(cifar, labels)))[:count]
        write_cifar(os.path.join(args.out, name), imgs, labs)

    import skimage.data
    faces = os.path.join(args.out, "faces")
    os.makedirs(faces, exist_ok=True)
    astro = np.asarray(Image.fromarray(skimage.data.astronaut()).convert("L"))
    camera = skimage.data.camera()
    crops = {"s1": (astro, (40, 160)), "s2": (camera, (60, 200))}
    for subject, (img, (top, left)) in crops.items():
        for i, (dy, dx) in enumerate(((0, 0), (3, 2), (-2, 4)), start=1):
            y, x = top + dy, left + dx
            write_pnm(os.path.join(faces, "%s_%d.pgm" % (subject, i)), img[y:y + 112, x:x + 92])


if __name__ == "__main__":
    main()
