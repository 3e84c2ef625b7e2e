from hypothesis import given, strategies as st
import pytest

from mtss.message import BlockMessage, diff, split_delimiter, split_fixed


def test_fixed_split():
    m = split_fixed(bytes(96), 8)
    assert m.n == 12 and m.join() == bytes(96)
    assert split_fixed(b"", 8).n == 1
    assert [len(b) for b in split_fixed(b"abcdefghij", 4)] == [4, 4, 2]
    with pytest.raises(ValueError):
        split_fixed(b"abc", 0)


def test_delimiter_split():
    text = b"".join(b"line %d\n" % i for i in range(9))
    m = split_delimiter(text, ord("\n"))
    assert m.n == 9 and m.join() == text
    assert split_delimiter(b"a\nb", 10).n == 2


@given(st.binary(max_size=300), st.integers(1, 40))
def test_fixed_rejoin(data, size):
    assert split_fixed(data, size).join() == data


@given(st.binary(max_size=300), st.integers(0, 255))
def test_delimiter_rejoin(data, delim):
    assert split_delimiter(data, delim).join() == data


def test_diff_and_replace():
    m = BlockMessage([b"a", b"b", b"c"])
    m2 = m.replace({1: b"x"})
    assert diff(m, m2) == {1} and m[1] == b"b"
    r = m.replace({0: None})
    assert r.redacted == {0}
    with pytest.raises(ValueError):
        r.join()
    with pytest.raises(ValueError):
        BlockMessage([])
