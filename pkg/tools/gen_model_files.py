#!/usr/bin/env python3
"""Generate the bundled CNN layer files (AlexNet, ResNet-50, GoogLeNet).

Layer shapes follow the standard 224x224x3 configurations as implemented in
common deep-learning libraries. GoogLeNet keeps the widely-deployed 3x3
kernel in the branch documented as 5x5; those layers carry published_kernel/
published_padding so the original-paper convention can be counted via a flag.
Auxiliary-classifier layers are tagged with group aux1/aux2 and skipped by
default at load time.

Run:  python tools/gen_model_files.py   (writes src/colpim/models/*.json)
"""

from __future__ import annotations

import json
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "src" / "colpim" / "models"


def conv(name, cin, cout, k, s, p, ih, iw, **extra):
    d = dict(kind="conv2d", name=name, in_channels=cin, out_channels=cout,
             kernel_h=k, kernel_w=k, stride=s, padding=p, input_h=ih, input_w=iw)
    d.update(extra)
    return d


def linear(name, fin, fout, **extra):
    d = dict(kind="linear", name=name, in_features=fin, out_features=fout)
    d.update(extra)
    return d


def out_hw(ih, k, s, p):
    return (ih + 2 * p - k) // s + 1


def pool(ih, k=3, s=2, ceil_mode=False):
    if ceil_mode:
        return -((ih - k) // -s) + 1
    return (ih - k) // s + 1


def alexnet():
    layers = [
        conv("conv1", 3, 64, 11, 4, 2, 224, 224),      # -> 55
        conv("conv2", 64, 192, 5, 1, 2, 27, 27),       # after pool 55 -> 27
        conv("conv3", 192, 384, 3, 1, 1, 13, 13),      # after pool 27 -> 13
        conv("conv4", 384, 256, 3, 1, 1, 13, 13),
        conv("conv5", 256, 256, 3, 1, 1, 13, 13),
        linear("fc1", 256 * 6 * 6, 4096),              # after pool 13 -> 6
        linear("fc2", 4096, 4096),
        linear("fc3", 4096, 1000),
    ]
    return dict(schema="colpim-cnn/1", name="alexnet", input=[224, 224, 3],
                layers=layers)


def resnet50():
    layers = [conv("conv1", 3, 64, 7, 2, 3, 224, 224)]     # -> 112, pool -> 56
    stage_cfg = [  # (blocks, mid, out, spatial_in of first block, stride)
        (3, 64, 256, 56, 1),
        (4, 128, 512, 56, 2),
        (6, 256, 1024, 28, 2),
        (3, 512, 2048, 14, 2),
    ]
    cin = 64
    for si, (blocks, mid, cout, s_in, stride) in enumerate(stage_cfg, start=1):
        s_out = s_in // stride
        for bi in range(blocks):
            tag = f"layer{si}.{bi}"
            if bi == 0:
                layers += [
                    conv(f"{tag}.conv1", cin, mid, 1, 1, 0, s_in, s_in),
                    conv(f"{tag}.conv2", mid, mid, 3, stride, 1, s_in, s_in),
                    conv(f"{tag}.conv3", mid, cout, 1, 1, 0, s_out, s_out),
                    conv(f"{tag}.downsample", cin, cout, 1, stride, 0, s_in, s_in),
                ]
            else:
                layers += [
                    conv(f"{tag}.conv1", cout, mid, 1, 1, 0, s_out, s_out),
                    conv(f"{tag}.conv2", mid, mid, 3, 1, 1, s_out, s_out),
                    conv(f"{tag}.conv3", mid, cout, 1, 1, 0, s_out, s_out),
                ]
            cin = cout
        cin = cout
    layers.append(linear("fc", 2048, 1000))
    return dict(schema="colpim-cnn/1", name="resnet50", input=[224, 224, 3],
                layers=layers)


def googlenet():
    def inception(tag, s, cin, c1, c3r, c3, c5r, c5, pp):
        # branch3 is implemented as 3x3 in deployed versions; the original
        # publication specifies 5x5 (exposed via published_kernel)
        return [
            conv(f"{tag}.b1", cin, c1, 1, 1, 0, s, s),
            conv(f"{tag}.b2a", cin, c3r, 1, 1, 0, s, s),
            conv(f"{tag}.b2b", c3r, c3, 3, 1, 1, s, s),
            conv(f"{tag}.b3a", cin, c5r, 1, 1, 0, s, s),
            conv(f"{tag}.b3b", c5r, c5, 3, 1, 1, s, s,
                 published_kernel=5, published_padding=2),
            conv(f"{tag}.b4", cin, pp, 1, 1, 0, s, s),
        ]

    layers = [
        conv("conv1", 3, 64, 7, 2, 3, 224, 224),        # -> 112, pool -> 56
        conv("conv2", 64, 64, 1, 1, 0, 56, 56),
        conv("conv3", 64, 192, 3, 1, 1, 56, 56),        # pool -> 28
    ]
    layers += inception("3a", 28, 192, 64, 96, 128, 16, 32, 32)
    layers += inception("3b", 28, 256, 128, 128, 192, 32, 96, 64)   # pool -> 14
    layers += inception("4a", 14, 480, 192, 96, 208, 16, 48, 64)
    layers += inception("4b", 14, 512, 160, 112, 224, 24, 64, 64)
    layers += inception("4c", 14, 512, 128, 128, 256, 24, 64, 64)
    layers += inception("4d", 14, 512, 112, 144, 288, 32, 64, 64)
    layers += inception("4e", 14, 528, 256, 160, 320, 32, 128, 128)  # pool -> 7
    layers += inception("5a", 7, 832, 256, 160, 320, 32, 128, 128)
    layers += inception("5b", 7, 832, 384, 192, 384, 48, 128, 128)
    layers.append(linear("fc", 1024, 1000))
    # auxiliary classifier heads (inputs: 4a output 512@14, 4d output 528@14;
    # 5x5/3 average pool -> 4x4)
    layers += [
        conv("aux1.conv", 512, 128, 1, 1, 0, 4, 4, group="aux1"),
        linear("aux1.fc1", 128 * 4 * 4, 1024, group="aux1"),
        linear("aux1.fc2", 1024, 1000, group="aux1"),
        conv("aux2.conv", 528, 128, 1, 1, 0, 4, 4, group="aux2"),
        linear("aux2.fc1", 128 * 4 * 4, 1024, group="aux2"),
        linear("aux2.fc2", 1024, 1000, group="aux2"),
    ]
    return dict(schema="colpim-cnn/1", name="googlenet", input=[224, 224, 3],
                layers=layers)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for model in (alexnet(), resnet50(), googlenet()):
        path = OUT / f"{model['name']}.json"
        with open(path, "w") as fh:
            json.dump(model, fh, indent=1)
            fh.write("\n")
        print(f"wrote {path} ({len(model['layers'])} layers)")


if __name__ == "__main__":
    main()
