#!/usr/bin/env python3
"""Regenerates the bundled synthetic six-class corpus under resources/toy/.

Each document mixes class-indicative words, words from a confusable
neighbour class, and neutral filler. A fraction of labels is flipped so a
linear bag-of-words model cannot be perfect and tends to be overconfident.
"""

import json
import pathlib
import random
import sys

LABELS = ["None", "Depression", "Anxiety", "Bipolar", "ADHD", "PTSD"]

VOCAB = {
    "None": "weekend game movie trip cook dog cat garden music concert recipe "
            "hike football coffee vacation holiday book party beach camera "
            "bike paint guitar dinner city travel puzzle team friend".split(),
    "Depression": "sad empty hopeless numb lonely worthless cry despair bed "
                  "tired miserable gloomy sorrow grief unhappy dark heavy "
                  "exhausted pointless alone failure burden weep".split(),
    "Anxiety": "anxious worry panic nervous fear heartbeat shaky sweat dread "
               "uneasy tense overthinking restless scared jittery afraid "
               "breath apprehensive stress alarm nausea".split(),
    "Bipolar": "manic mood euphoric swings lithium episode crash impulsive "
               "energy sleepless elated irritable moody hypomania spending "
               "racing grandiose depressive stabilizer cycle".split(),
    "ADHD": "focus distracted forgetful hyper medication adderall procrastinate "
            "attention fidgety deadline lose organize concentrate homework "
            "diagnosis stimulant messy late impulsive scatterbrained".split(),
    "PTSD": "flashback trauma nightmare trigger veteran assault startled "
            "memory hypervigilant scream accident combat terror jumpy shaken "
            "avoid survivor therapy numb abuse".split(),
}

CONFUSABLE = {
    "None": ["ADHD"],
    "Depression": ["Bipolar", "PTSD"],
    "Anxiety": ["PTSD", "ADHD"],
    "Bipolar": ["Depression", "ADHD"],
    "ADHD": ["Anxiety", "Bipolar"],
    "PTSD": ["Anxiety", "Depression"],
}

FILLER = ("i me my the a an and but so really just feel think know day week "
          "time people work life thing today night morning always never "
          "often sometimes help need want try get make good bad big little "
          "new old start stop talk friend family home school job better "
          "worse maybe still again much more very quite go come see look "
          "hard easy long short").split()


def sentence(rng, label, n_words, signal):
    words = []
    for _ in range(n_words):
        u = rng.random()
        if u < signal:
            words.append(rng.choice(VOCAB[label]))
        elif u < signal + 0.12:
            words.append(rng.choice(VOCAB[rng.choice(CONFUSABLE[label])]))
        elif u < signal + 0.17:
            words.append(rng.choice(VOCAB[rng.choice(LABELS)]))
        else:
            words.append(rng.choice(FILLER))
    text = " ".join(words)
    return text[:1].upper() + text[1:]


def document(rng, idx, label, split):
    signal = rng.uniform(0.06, 0.30)
    title = sentence(rng, label, rng.randint(3, 7), signal)
    sentences = [sentence(rng, label, rng.randint(6, 14), signal)
                 for _ in range(rng.randint(2, 4))]
    body = ". ".join(sentences) + "."
    if rng.random() < 0.10:
        label = rng.choice([l for l in LABELS if l != label])
    return {"id": f"{split}{idx:04d}", "title": title, "post": body, "label": label}


def main():
    out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "resources/toy")
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20240607)
    for split, per_class in (("train", 100), ("test", 20)):
        docs = []
        for label in LABELS:
            for _ in range(per_class):
                docs.append(document(rng, len(docs), label, split))
        rng.shuffle(docs)
        with open(out / f"{split}.jsonl", "w", newline="\n") as f:
            for d in docs:
                f.write(json.dumps(d) + "\n")
        print(f"{split}: {len(docs)} documents")


if __name__ == "__main__":
    main()
