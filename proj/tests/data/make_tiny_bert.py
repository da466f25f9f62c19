#!/usr/bin/env python3
"""Builds the tiny random BERT fixture under tests/data/tiny_bert/ and freezes
reference outputs computed by Hugging Face `transformers` (BertTokenizer for
word pieces, BertModel for hidden states).

    python3 tests/data/make_tiny_bert.py
"""

import json
import os
import sys

import torch
from transformers import BertConfig, BertModel

try:  # transformers >= 5 keeps the pure-Python WordPiece tokenizer under this name
    from transformers import BertTokenizerLegacy as BertTokenizer
except ImportError:
    from transformers import BertTokenizer

HERE = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, os.path.join(HERE, "..", "..", "tools", "scripts"))
from export_bert import export_model  # noqa: E402

OUT = os.path.join(HERE, "tiny_bert")

VOCAB = (
    ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
    + list(".,;:!?()-'\"")
    + "the a of and in to is for with on we are this by an".split()
    + "frequent item ##sets ##set network bayesian support vector machine data min ##ing prun".split()
    + "interest ##ing ##ness key ##phrase ##s embed ##ding rank extract ##ion model learn".split()
    + "document algorithm efficient graph neural cafe resume naive".split()
    + ["##" + c for c in "abcdefghijklmnopqrstuvwxyz"]
    + list("abcdefghijklmnopqrstuvwxyz")
)

SENTENCES = [
    ["efficient", "algorithms", "for", "pruning", "frequent", "itemsets"],
    ["Bayesian", "network", "model", "of", "keyphrases", "."],
    ["Support", "vector", "machine", "(", "SVM", ")", "embeddings", "and", "data", "mining"],
    ["Café", "résumé", "naïve", "keyphrase-extraction", "don't"],
    ["xyzzyplughwhatever", "中文", "graph"],
]


def main():
    torch.manual_seed(1234)
    os.makedirs(OUT, exist_ok=True)
    vocab_path = os.path.join(OUT, "vocab.txt")
    with open(vocab_path, "w", encoding="utf-8") as f:
        f.write("\n".join(VOCAB) + "\n")
    tokenizer = BertTokenizer(vocab_file=vocab_path, do_lower_case=True)

    config = BertConfig(
        vocab_size=len(VOCAB),
        hidden_size=32,
        num_hidden_layers=3,
        num_attention_heads=4,
        intermediate_size=48,
        max_position_embeddings=40,
        type_vocab_size=2,
        hidden_act="gelu",
        layer_norm_eps=1e-12,
    )
    model = BertModel(config, add_pooling_layer=False)
    with torch.no_grad():
        for name, p in model.named_parameters():
            if "LayerNorm" in name:
                p.copy_(1.0 + 0.1 * torch.randn_like(p) if name.endswith("weight") else 0.1 * torch.randn_like(p))
            else:
                p.copy_(0.3 * torch.randn_like(p))
    model.eval()
    export_model(model, VOCAB, OUT, do_lower_case=True, max_pieces=32)

    cases = []
    for words in SENTENCES:
        pieces = [tokenizer.tokenize(w) for w in words]
        ids = [tokenizer.convert_tokens_to_ids(p) for p in pieces]
        flat = [tokenizer.cls_token_id] + [i for p in ids for i in p] + [tokenizer.sep_token_id]
        with torch.no_grad():
            out = model(torch.tensor([flat]), output_hidden_states=True)
        layers = []
        for layer in range(1, config.num_hidden_layers + 1):
            content = out.hidden_states[layer][0, 1:-1, :]
            layers.append({
                "layer": layer,
                "max": content.max(dim=0).values.tolist(),
                "avg": content.mean(dim=0).tolist(),
                "first_piece": content[0].tolist(),
            })
        cases.append({"words": words, "pieces": pieces, "piece_ids": ids, "layers": layers})

    with open(os.path.join(OUT, "expected.json"), "w", encoding="utf-8") as f:
        json.dump({"cases": cases}, f, indent=1, ensure_ascii=False)
        f.write("\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
