import pytest

from xasp import corpus
from xasp.explain import explain_program
from xasp.syntax import parse_program

CN_LP_RULE = """cn_lp(Y, Z) :- node(Y), node(Z),
   not edge(Y, Z), Y!=Z,
   n=#count{X:c(X, Y, Z)}."""


@pytest.fixture(scope="session")
def didactic_text():
    return corpus.read("lp_didactic.lp")


@pytest.fixture(scope="session")
def didactic(didactic_text):
    return parse_program(didactic_text)


@pytest.fixture(scope="session")
def didactic_result(didactic):
    return explain_program(didactic)


@pytest.fixture(scope="session")
def corpus_programs():
    return {name: parse_program(corpus.read(name)) for name in corpus.names()}
