"""Random problem instances shared by unit, property and acceptance tests."""
from __future__ import annotations

from uncertain_conformance.petri import SystemNet
from uncertain_conformance.synth import generate_model, random_uncertain_trace
from uncertain_conformance.uncertain_log import count_realizations


def relabel(net: SystemNet, rng, alphabet="ABC", p_silent=0.2) -> SystemNet:
    """Same structure with random labels, duplicates and extra silent steps allowed."""
    labels = {}
    for t in sorted(net.transitions, key=repr):
        if rng.random() >= p_silent:
            labels[t] = alphabet[int(rng.integers(len(alphabet)))]
    return SystemNet(net.places, net.transitions, net.arcs, labels, net.initial_marking, net.final_marking)


def small_model(rng, max_transitions=6) -> SystemNet:
    while True:
        net = generate_model(int(rng.integers(1, 6)), int(rng.integers(2**31)))
        if len(net.transitions) <= max_transitions:
            return relabel(net, rng)


def model_and_trace(rng, max_n=8, max_events=5, max_realizations=100, p=0.3):
    """A generated model and a random uncertain trace over its labels plus one foreign label."""
    while True:
        model = generate_model(int(rng.integers(1, max_n + 1)), int(rng.integers(2**31)))
        alphabet = sorted(set(model.labels.values())) + ["Z"]
        trace = random_uncertain_trace(rng, int(rng.integers(0, max_events + 1)), alphabet, p)
        n = count_realizations(trace, max_realizations)
        if n is not None:
            return model, trace


def small_trace(rng, max_events=4, alphabet="ABCD", p=0.3):
    return random_uncertain_trace(rng, int(rng.integers(0, max_events + 1)), list(alphabet), p)
