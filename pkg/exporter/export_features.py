#!/usr/bin/env python3
"""Export 2048-d InceptionV3 pool3 embeddings for an image directory.

Writes the FEAT binary format consumed by the curvesmith `fid` command
(magic "FEAT", u32 version=1, u32 dim, u64 count, count*dim little-endian
f32 row-major, u32 CRC32 of the payload) plus a sidecar manifest JSON
mapping rows to filenames.

Usage: export_features.py --input-dir D --out features.feat [--batch-size N]
Exit codes: 0 success, 1 domain error (no usable images), 2 I/O error.
"""

import argparse
import json
import logging
import os
import struct
import sys
import tempfile
import zlib
from pathlib import Path

import numpy as np
import torch
from PIL import Image
from torchvision import transforms
from torchvision.models import Inception_V3_Weights, inception_v3

log = logging.getLogger("export_features")

IMAGE_EXTENSIONS = {".png", ".jpg", ".jpeg", ".bmp", ".tif", ".tiff"}
FEATURE_DIM = 2048
WEIGHT_SEED = 0

# canonical FID preprocessing: 299x299 bilinear, ImageNet normalization
PREPROCESS = transforms.Compose([
    transforms.Resize((299, 299), interpolation=transforms.InterpolationMode.BILINEAR),
    transforms.ToTensor(),
    transforms.Normalize(mean=[0.485, 0.456, 0.406], std=[0.229, 0.224, 0.225]),
])


def build_model():
    """InceptionV3 with the classifier head removed, so forward() yields pool3.

    Falls back to a seeded random initialization when the pretrained
    weights cannot be downloaded (offline environments); the manifest
    records which variant produced the file.
    """
    try:
        model = inception_v3(weights=Inception_V3_Weights.IMAGENET1K_V1)
        model_name = "inception_v3_imagenet1k_v1"
    except Exception as exc:  # noqa: BLE001 - any download failure falls back
        log.warning("pretrained weights unavailable (%s); using seeded random init", exc)
        torch.manual_seed(WEIGHT_SEED)
        model = inception_v3(weights=None, aux_logits=True, init_weights=True)
        model_name = f"inception_v3_random_init_seed{WEIGHT_SEED}"
    model.fc = torch.nn.Identity()
    model.eval()
    return model, model_name


def list_images(input_dir):
    input_dir = Path(input_dir)
    if not input_dir.is_dir():
        raise NotADirectoryError(f"not a directory: {input_dir}")
    return sorted(
        p for p in input_dir.iterdir()
        if p.is_file() and p.suffix.lower() in IMAGE_EXTENSIONS
    )


def load_batch(paths):
    tensors, kept, skipped = [], [], []
    for path in paths:
        try:
            with Image.open(path) as im:
                tensors.append(PREPROCESS(im.convert("RGB")))
            kept.append(path.name)
        except Exception as exc:  # noqa: BLE001 - per-file decode errors are skips
            log.warning("skipping unreadable image %s: %s", path, exc)
            skipped.append(path.name)
    return tensors, kept, skipped


def extract_features(model, paths, batch_size):
    rows, files, skipped = [], [], []
    with torch.no_grad():
        for start in range(0, len(paths), batch_size):
            tensors, kept, bad = load_batch(paths[start:start + batch_size])
            skipped.extend(bad)
            if not tensors:
                continue
            out = model(torch.stack(tensors))
            rows.append(out.cpu().numpy().astype(np.float32))
            files.extend(kept)
    features = np.concatenate(rows) if rows else np.empty((0, FEATURE_DIM), np.float32)
    return features, files, skipped


def write_feat_atomic(features, out_path):
    payload = np.ascontiguousarray(features, dtype="<f4").tobytes()
    blob = (b"FEAT"
            + struct.pack("<IIQ", 1, features.shape[1], features.shape[0])
            + payload
            + struct.pack("<I", zlib.crc32(payload) & 0xFFFFFFFF))
    out_path = Path(out_path)
    fd, tmp = tempfile.mkstemp(dir=out_path.parent or ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(blob)
        os.replace(tmp, out_path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def export_features(input_dir, output_path, batch_size=32):
    """Run the full export; returns the manifest dict."""
    paths = list_images(input_dir)
    model, model_name = build_model()
    features, files, skipped = extract_features(model, paths, batch_size)
    if features.shape[0] < 2:
        raise ValueError(
            f"need at least 2 decodable images in {input_dir}, got {features.shape[0]} "
            f"({len(skipped)} skipped)"
        )
    write_feat_atomic(features, output_path)
    manifest = {
        "input_dir": str(input_dir),
        "output_path": str(output_path),
        "model_name": model_name,
        "preprocessing": "resize 299x299 bilinear, ImageNet mean/std normalization",
        "dim": FEATURE_DIM,
        "files": files,
        "skipped": skipped,
    }
    manifest_path = Path(str(output_path) + ".manifest.json")
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest


def main(argv=None):
    logging.basicConfig(stream=sys.stderr, level=logging.WARNING,
                        format="%(levelname)s %(message)s")
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--input-dir", required=True, type=Path)
    parser.add_argument("--out", required=True, type=Path)
    parser.add_argument("--batch-size", type=int, default=32)
    args = parser.parse_args(argv)
    try:
        manifest = export_features(args.input_dir, args.out, args.batch_size)
    except (NotADirectoryError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {len(manifest['files'])} x {manifest['dim']} features to {args.out} "
          f"({len(manifest['skipped'])} skipped)", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
