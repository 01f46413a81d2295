import pytest

from slpgram import build_chain, build_random, build_repair, compute_metrics, parse_slp

# 13-character sample over {a, b}; small enough to check everything by hand.
G7_DOC = """\
1 T 97
2 T 98
3 N 1 2
4 N 1 3
5 N 3 4
6 N 4 5
7 N 6 5
"""
G7_TEXT = b"aababaababaab"


@pytest.fixture
def g7():
    return parse_slp(G7_DOC)


@pytest.fixture
def g7_metrics(g7):
    return compute_metrics(g7)


def _sample_grammars():
    samples = [
        ("g7", parse_slp(G7_DOC)),
        ("single", parse_slp("1 T 97\n")),
        ("chain-miss", build_chain(b"mississippi")),
        ("chain-a4", build_chain(b"aaaa")),
        ("repair-abra", build_repair(b"abracadabra" * 20)),
        ("repair-ab", build_repair(b"ab" * 50)),
        ("repair-bin", build_repair(bytes(range(8)) * 9 + b"\x00\xff" * 7)),
    ]
    for seed in range(6):
        samples.append((f"random-{seed}", build_random(30, 3, seed)))
    for seed in range(4):
        samples.append((f"random-big-{seed}", build_random(70, 3, 100 + seed)))
    return samples


@pytest.fixture(scope="session")
def sample_grammars():
    return _sample_grammars()
