import pytest

from wordmap.errors import UsageError, VerificationFailed
from wordmap.fields import Field
from wordmap.matrices import Matrix
from wordmap.words import (
    CommutatorProduct,
    DiagonalWord,
    eval_word,
    make_witness,
    parse_word,
)

F5 = Field("prime", p=5)
Q = Field("rationals")


def test_parse_comm():
    w = parse_word("comm:m=4", F5)
    assert isinstance(w, CommutatorProduct) and w.m == 4
    with pytest.raises(UsageError):
        parse_word("comm:m=3", F5)
    with pytest.raises(UsageError):
        parse_word("comm:m=0", F5)


def test_parse_diag():
    w = parse_word("diag:d=1,k=2;d=3,k=5", F5)
    assert isinstance(w, DiagonalWord)
    assert [(d.rep, k) for d, k in w.terms] == [(1, 2), (3, 5)]
    wq = parse_word("diag:d=1/2,k=2", Q)
    assert str(wq.terms[0][0].rep) == "1/2"
    with pytest.raises(UsageError):
        parse_word("diag:d=0,k=2", F5)
    with pytest.raises(UsageError):
        parse_word("diag:k=2", F5)
    with pytest.raises(UsageError):
        parse_word("nonsense", F5)


def test_eval_comm_product():
    X = Matrix.from_rows(F5, [[0, 1], [0, 0]])
    Y = Matrix.from_rows(F5, [[0, 0], [1, 0]])
    got = eval_word(CommutatorProduct(2), [X, Y])
    assert got == X * Y - Y * X


def test_eval_diag():
    word = DiagonalWord(((F5(2), 2), (F5(3), 1)))
    X = Matrix.diagonal(F5, [1, 2])
    Y = Matrix.diagonal(F5, [3, 4])
    got = eval_word(word, [X, Y])
    assert got == (X * X).scale(F5(2)) + Y.scale(F5(3))
    with pytest.raises(UsageError):
        eval_word(word, [X])


def test_make_witness_refuses_mismatch():
    word = DiagonalWord(((F5(1), 2),))
    X = Matrix.diagonal(F5, [2])
    with pytest.raises(VerificationFailed):
        make_witness(word, Matrix.diagonal(F5, [3]), [X])
    w = make_witness(word, Matrix.diagonal(F5, [4]), [X])
    assert w.verified and w.reverify()


def test_word_spec_round_trip():
    for spec in ("comm:m=2", "comm:m=6"):
        assert parse_word(spec, F5).spec_string() == spec
