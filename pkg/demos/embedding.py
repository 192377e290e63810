"""Rebuild the 13-coordinate embedding of Y333 and count nonsingular shape vectors."""

from coxdeflate import ambient_from_gram, build_y_diagram, closure, quotient_by_relations
from coxdeflate import reconstruct_embedding, shape_census

state = closure(build_y_diagram((3, 3, 3)), 8, 14)
emb = reconstruct_embedding(state)
for lab, v in zip(emb.labels, emb.vectors):
    print(f"{lab:3s} {v}")
qs = quotient_by_relations(ambient_from_gram(state.form), state.relations)
census = shape_census(emb, qs, state.form)
print("shape counts", census["counts"], "total", census["total"])
