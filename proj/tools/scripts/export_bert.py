#!/usr/bin/env python3
"""Exports a Hugging Face BERT checkpoint into the encoder directory layout
read by `mderank::load_transformer_backend`:

    <out>/manifest.json   architecture + tokenizer settings
    <out>/vocab.txt       word-piece vocabulary, one piece per line
    <out>/graph.bin       encoder weights (little-endian float32 tensors)

graph.bin layout:
    char[4] "MDEG" | u32 version (=1) | u32 tensor_count
    per tensor: u32 name_len | name | u32 ndim | i64 dims[ndim] | f32 data[prod(dims)]

Usage:
    python3 tools/scripts/export_bert.py /path/to/bert-base-uncased out/bert-base
"""

import argparse
import json
import os
import struct
import sys


def write_graph(path, tensors):
    with open(path, "wb") as f:
        f.write(b"MDEG")
        f.write(struct.pack("<II", 1, len(tensors)))
        for name, array in tensors:
            encoded = name.encode("utf-8")
            f.write(struct.pack("<I", len(encoded)))
            f.write(encoded)
            f.write(struct.pack("<I", array.ndim))
            f.write(struct.pack("<" + "q" * array.ndim, *array.shape))
            f.write(array.astype("<f4", copy=False).tobytes(order="C"))


def export_model(model, vocab_lines, out_dir, do_lower_case=True, max_pieces=512):
    """Writes `model` (a transformers BertModel) and its vocabulary to out_dir."""
    cfg = model.config
    os.makedirs(out_dir, exist_ok=True)
    state = model.state_dict()
    tensors = []
    for name, value in state.items():
        if name.startswith("bert."):
            name = name[len("bert."):]
        if not (name.startswith("embeddings.") or name.startswith("encoder.")):
            continue
        if name.endswith("position_ids") or name.endswith("token_type_ids"):
            continue
        tensors.append((name, value.detach().cpu().float().numpy()))
    write_graph(os.path.join(out_dir, "graph.bin"), tensors)

    with open(os.path.join(out_dir, "vocab.txt"), "w", encoding="utf-8") as f:
        for line in vocab_lines:
            f.write(line + "\n")

    manifest = {
        "format": "mderank-encoder",
        "version": 1,
        "architecture": "bert",
        "num_layers": cfg.num_hidden_layers,
        "hidden_size": cfg.hidden_size,
        "num_heads": cfg.num_attention_heads,
        "intermediate_size": cfg.intermediate_size,
        "vocab_size": cfg.vocab_size,
        "max_position": cfg.max_position_embeddings,
        "type_vocab_size": cfg.type_vocab_size,
        "layer_norm_eps": cfg.layer_norm_eps,
        "hidden_act": cfg.hidden_act,
        "do_lower_case": do_lower_case,
        "mask_piece": "[MASK]",
        "unk_piece": "[UNK]",
        "cls_piece": "[CLS]",
        "sep_piece": "[SEP]",
        "max_pieces": min(max_pieces, cfg.max_position_embeddings),
    }
    with open(os.path.join(out_dir, "manifest.json"), "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2)
        f.write("\n")


def main(argv):
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("checkpoint", help="local Hugging Face model directory or hub id")
    parser.add_argument("out_dir")
    parser.add_argument("--max-pieces", type=int, default=512)
    args = parser.parse_args(argv)

    from transformers import BertModel
    try:
        from transformers import BertTokenizerLegacy as BertTokenizer
    except ImportError:
        from transformers import BertTokenizer

    model = BertModel.from_pretrained(args.checkpoint)
    model.eval()
    tokenizer = BertTokenizer.from_pretrained(args.checkpoint)
    vocab = [piece for piece, _ in sorted(tokenizer.vocab.items(), key=lambda kv: kv[1])]
    export_model(model, vocab, args.out_dir, tokenizer.do_lower_case, args.max_pieces)
    print(f"wrote {args.out_dir}")


if __name__ == "__main__":
    main(sys.argv[1:])
