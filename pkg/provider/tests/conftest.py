import os

import pytest
import torch
from transformers import BertConfig, BertForMaskedLM, BertTokenizer

# Plenty of plain words so top-32 prediction lists survive filtering.
WORDS = """the small garden shows great beauty every summer grows quietly
yard lawn park water flows river stone path light shade tree branch leaf
flower grass bird song wind cloud rain storm sun moon star night day morning
evening road house door window wall roof floor room table chair book page
word line voice sound color shape size form kind sort type way manner style
""".split()


@pytest.fixture(scope="session")
def tiny_model_dir(tmp_path_factory):
    """A small randomly-initialized BERT with a word-level vocabulary.

    Seeded initialization keeps every run identical; eight hidden layers so
    the default contextual-similarity depth is exercised in full.
    """
    root = tmp_path_factory.mktemp("tiny_bert")
    vocab = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"] + WORDS
    vocab_path = os.path.join(root, "vocab.txt")
    with open(vocab_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(vocab) + "\n")
    tokenizer = BertTokenizer(vocab=vocab_path, do_lower_case=True)
    config = BertConfig(
        vocab_size=len(vocab),
        hidden_size=32,
        num_hidden_layers=8,
        num_attention_heads=4,
        intermediate_size=64,
        max_position_embeddings=128,
    )
    torch.manual_seed(20240501)
    model = BertForMaskedLM(config)
    model.save_pretrained(root)
    tokenizer.save_pretrained(root)
    return str(root)


@pytest.fixture(scope="session")
def vectors_file(tmp_path_factory):
    root = tmp_path_factory.mktemp("vectors")
    path = os.path.join(root, "vectors.txt")
    with open(path, "w", encoding="utf-8") as fh:
        for i, word in enumerate(WORDS[:30]):
            fh.write(f"{word} {1.0 + i * 0.01:.4f} {0.5:.4f} {-0.25:.4f}\n")
    return path
