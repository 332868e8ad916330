#!/usr/bin/env python3
"""Write a splitopt-profile file from a Keras model.

Each Keras layer becomes one profile layer with its trainable parameter
count. Edges follow the functional graph; their size is left as "derive"
unless --activation-bits is given, in which case the producing layer's
output size (elements x bits) is used.

    python3 tools/keras_to_profile.py resnet50 out.profile.json
    python3 tools/keras_to_profile.py saved_model.keras out.profile.json --activation-bits 32
"""

import argparse
import json
import math


def load(name):
    import tensorflow as tf

    apps = {"resnet50": tf.keras.applications.ResNet50, "mobilenetv2": tf.keras.applications.MobileNetV2}
    if name.lower() in apps:
        return apps[name.lower()](weights=None)
    return tf.keras.models.load_model(name)


def output_elements(layer):
    shape = layer.output.shape
    return math.prod(d for d in shape[1:] if d is not None)


def successors(model):
    index = {layer.name: i for i, layer in enumerate(model.layers)}
    out = {layer.name: [] for layer in model.layers}
    for layer in model.layers:
        for node in layer._inbound_nodes:
            for parent in node.parent_nodes:
                src = parent.operation.name
                if src in index and index[src] < index[layer.name] and layer.name not in out[src]:
                    out[src].append(layer.name)
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("model", help="keras.applications name or a saved model path")
    ap.add_argument("out")
    ap.add_argument("--activation-bits", type=int, default=0,
                    help="bits per activation element; 0 derives edge size from layer memory")
    args = ap.parse_args()

    model = load(args.model)
    succ = successors(model)
    layers = []
    for layer in model.layers:
        entry = {"name": layer.name,
                 "trainable_params": int(sum(math.prod(w.shape) for w in layer.trainable_weights))}
        edges = []
        for target in succ[layer.name]:
            bits = output_elements(layer) * args.activation_bits if args.activation_bits else "derive"
            edges.append({"to": target, "bits": bits})
        if edges:
            entry["successors"] = edges
        layers.append(entry)

    with open(args.out, "w") as f:
        json.dump({"format": "splitopt-profile", "version": 1, "layers": layers}, f, indent=2)
        f.write("\n")
    print(f"{len(layers)} layers written to {args.out}")


if __name__ == "__main__":
    main()
