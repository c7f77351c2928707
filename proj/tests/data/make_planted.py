#!/usr/bin/env python3
"""Generate the planted-block knowledge graph under tests/data/planted/."""
import os
import random

BLOCKS = 10
DISEASES = 50
GENES = 200
SYMPTOMS = 50
GO_TERMS = 20
PATHWAYS = 10


def main(out_dir):
    rng = random.Random(20261014)
    os.makedirs(out_dir, exist_ok=True)
    triples = []
    genes_in = {b: [f"gene{g:03d}" for g in range(GENES) if g % BLOCKS == b] for b in range(BLOCKS)}
    symptoms_in = {b: [f"sym{s:02d}" for s in range(SYMPTOMS) if s % BLOCKS == b] for b in range(BLOCKS)}
    for d in range(DISEASES):
        b = d % BLOCKS
        name = f"dis{d:02d}"
        for g in rng.sample(genes_in[b], 8):
            triples.append((name, "disease_gene", g, None))
        for s in rng.sample(symptoms_in[b], 3):
            triples.append((name, "disease_symptom", s, None))
    for i in range(GENES):
        for j in range(i + 1, GENES):
            p = 0.15 if i % BLOCKS == j % BLOCKS else 0.005
            if rng.random() < p:
                triples.append((f"gene{i:03d}", "ppi", f"gene{j:03d}", rng.randint(400, 999)))
    for g in range(GENES):
        b = g % BLOCKS
        triples.append((f"go{2 * b + rng.randint(0, 1):02d}", "go_protein", f"gene{g:03d}", None))
        if rng.random() < 0.7:
            triples.append((f"pw{b:02d}", "pathway_protein", f"gene{g:03d}", None))
    with open(os.path.join(out_dir, "triples.tsv"), "w") as f:
        for h, r, t, s in triples:
            f.write(f"{h}\t{r}\t{t}" + (f"\t{s}" if s is not None else "") + "\n")
    with open(os.path.join(out_dir, "entity_types.tsv"), "w") as f:
        for d in range(DISEASES):
            f.write(f"dis{d:02d}\tdisease\n")
        for g in range(GENES):
            f.write(f"gene{g:03d}\tprotein\n")
        for s in range(SYMPTOMS):
            f.write(f"sym{s:02d}\tsymptom\n")
        for g in range(GO_TERMS):
            f.write(f"go{g:02d}\tgo\n")
        for p in range(PATHWAYS):
            f.write(f"pw{p:02d}\tpathway\n")


if __name__ == "__main__":
    main(os.path.join(os.path.dirname(os.path.abspath(__file__)), "planted"))
