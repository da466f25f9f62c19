#!/usr/bin/env python3
"""Regenerates core/data/lexicon_en.tsv, the bundled word->Penn tag lexicon.

Word list: the 5,000 most frequent alphabetic English words from `wordfreq`.
Tags: a hand-written closed-class table, then `lemminflect` inflection tables
for open-class words, resolved by a fixed preference order.

    pip install wordfreq lemminflect
    python3 tools/scripts/gen_lexicon.py > core/data/lexicon_en.tsv
"""

import sys

import lemminflect
from wordfreq import top_n_list

CLOSED = {
    "DT": "the a an this that these those every each some any no all both either neither another",
    "IN": "of in for on with at by from as into about than after over between through during before under "
          "against without within among until upon since across behind beyond toward towards despite near "
          "via per like unlike because although though while whereas if unless whether onto throughout "
          "beneath besides amongst along around above below inside outside off out up down",
    "CC": "and or but nor yet plus",
    "TO": "to",
    "MD": "can could will would shall should may might must cannot",
    "PRP": "i you he she it we they me him her us them myself yourself himself herself itself ourselves "
           "themselves one",
    "PRP$": "my your his its our their",
    "WDT": "which whatever whichever",
    "WP": "who whom what whoever",
    "WP$": "whose",
    "WRB": "where when why how wherever whenever",
    "EX": "there",
    "RB": "not very also just so too only then now here even still already again never always often "
          "ever perhaps rather quite almost thus hence therefore however moreover furthermore",
    "CD": "two three four five six seven eight nine ten eleven twelve twenty thirty forty fifty hundred "
          "thousand million billion",
    "VBZ": "is has does",
    "VBP": "are am have do",
    "VBD": "was were had did",
    "VBN": "been",
    "VB": "be",
    "VBG": "being",
    "UH": "oh yeah hey ok okay yes",
}

PREFERENCE = ["NN", "NNS", "JJ", "JJR", "JJS", "VBG", "VBN", "VBD", "VBZ", "VB", "VBP", "RB", "RBR", "RBS"]


def penn_candidates(word):
    tags = set()
    for upos, lemmas in lemminflect.getAllLemmas(word).items():
        for lemma in lemmas:
            for tag, forms in lemminflect.getAllInflections(lemma, upos=upos).items():
                if word in forms:
                    tags.add(tag)
    return tags


def main():
    closed = {}
    for tag, words in CLOSED.items():
        for w in words.split():
            closed.setdefault(w, tag)

    words = [w for w in top_n_list("en", 8000) if w.isalpha() and w.isascii()][:5000]
    out = sys.stdout
    for w in words:
        if w in closed:
            tag = closed[w]
        else:
            cands = penn_candidates(w)
            if w.endswith("ly") and cands & {"RB"}:
                tag = "RB"
            else:
                tag = next((t for t in PREFERENCE if t in cands), None)
            if tag is None:
                # Unknown to the inflection tables: single letters and names.
                tag = "SYM" if len(w) == 1 and w not in ("a", "i") else "NN"
        out.write(f"{w}\t{tag.replace('$', 'S')}\n")


if __name__ == "__main__":
    main()
