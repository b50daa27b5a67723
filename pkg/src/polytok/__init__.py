"""Preprocessing and evaluation toolkit for low-resource, morphologically
rich machine translation: corpus management, four tokenization strategies
(word-level, rule-based morphological, MDL-based unsupervised, BPE), and
corpus-level BLEU scoring."""

__version__ = "0.1.0"
