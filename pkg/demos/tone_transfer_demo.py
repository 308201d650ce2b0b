"""Walkthrough of the retouching baseline on a synthetic dataset.

Generates smooth random "raw" photos, builds brightened "artist" versions
with a gamma curve on the L channel, trains the curve regressor, and
applies it to a held-out image. Outputs land in demos/output/.

Run: python3 demos/tone_transfer_demo.py
"""

from pathlib import Path

import numpy as np
from PIL import Image

from curvesmith import cli, color, pipeline
from curvesmith.preprocess import resize_bicubic

OUT = Path(__file__).parent / "output"
rng = np.random.default_rng(7)


def smooth_image(size=96):
    base = (rng.random((8, 8, 3)) * 255).astype(np.uint8)
    return resize_bicubic(base, size, size)


def artist_version(img):
    # the "artist" brightens shadows: L' = 100 * (L/100)^0.5
    lab = color.rgb_to_lab(img)
    lab[..., 0] = 100.0 * np.sqrt(lab[..., 0] / 100.0)
    return color.lab_to_rgb(lab)


def main():
    raw_dir = OUT / "raw"
    artist_dir = OUT / "artist"
    for d in (raw_dir, artist_dir):
        d.mkdir(parents=True, exist_ok=True)

    print("1. writing 24 synthetic raw/artist pairs ...")
    for i in range(24):
        img = smooth_image()
        Image.fromarray(img).save(raw_dir / f"photo{i:02d}.png")
        Image.fromarray(artist_version(img)).save(artist_dir / f"photo{i:02d}.png")

    print("2. training the curve regressor (5-fold CV over the length-scale grid) ...")
    model_path = OUT / "artist.gprm"
    cli.main(["fit", "--raw-dir", str(raw_dir), "--target-dir", str(artist_dir),
              "--out", str(model_path)])

    print("3. retouching a held-out image ...")
    held = smooth_image()
    held_path = OUT / "held_out.png"
    Image.fromarray(held).save(held_path)
    result_path = OUT / "held_out_retouched.png"
    cli.main(["apply", "--model", str(model_path),
              "--input", str(held_path), "--output", str(result_path)])

    goal = pipeline.image_curve(artist_version(held))
    before = float(np.sum((pipeline.image_curve(held) - goal) ** 2))
    after_img = np.asarray(Image.open(result_path).convert("RGB"))
    after = float(np.sum((pipeline.image_curve(after_img) - goal) ** 2))
    print(f"   curve distance to the artist's goal: {before:.4f} -> {after:.4f}")
    print(f"   outputs in {OUT}")


if __name__ == "__main__":
    main()
