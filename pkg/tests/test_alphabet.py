import pytest

from olpm.alphabet import (REPEAT, SKIP, AlphabetError, PhonemeSpec, SymbolSpace, UnknownAtom, default_space,
                           load_inventory, parse_inventory, plain_space, up_down_mark)


@pytest.fixture(scope="module")
def space():
    return default_space()


def test_inventory_size(space):
    assert len(space.inventory) == 20
    # 2 technical + 20 phonemes x sync x stress x ons x cod x 3 positions
    assert space.size == 2 + 20 * 2 * 2 * 2 * 2 * 3


def test_technical_indices(space):
    assert space.symbols[SKIP].kind == "skip"
    assert space.symbols[REPEAT].kind == "repeat"
    assert space.atom("skip") | space.atom("repeat") == space.technical_mask


def test_anything_includes_technical(space):
    assert space.atom("anything") == space.full
    assert space.atom("segment") == space.full & ~space.technical_mask


def test_sync_partition(space):
    assert space.atom(":1") & space.atom(":0") == 0
    assert space.atom(":1") | space.atom(":0") == space.segment_mask


def test_roles_partition(space):
    roles = [space.atom(r) for r in ("Ons", "Nuc", "Cod", "CO")]
    assert sum(roles) == space.segment_mask
    assert space.atom("Ons") == space.atom("ons") & ~space.atom("cod")
    assert space.atom("CO") == space.atom("ons") & space.atom("cod")


def test_formula_denotation(space):
    bits = space.denote("k & ':1' & stressed & 'Ons' & initial")
    members = [space.symbols[i] for i in space.members(bits)]
    assert len(members) == 1
    assert str(members[0]) == "k:1'/Ons/ini"


def test_complement_stays_in_segments(space):
    assert space.denote("~k") & space.technical_mask == 0
    assert space.denote("~k") | space.atom("k") == space.segment_mask
    # mentioning a technical atom complements over the full alphabet
    assert space.denote("~skip") == space.full & ~space.atom("skip")


def test_features(space):
    vowels = {space.symbols[i].phoneme for i in space.members(space.atom("vowel"))}
    assert vowels == set("aeEi@oOu")
    close_mid = {space.symbols[i].phoneme for i in space.members(space.atom("close_mid"))}
    assert close_mid == {"e", "@", "o"}


def test_unknown_atom(space):
    with pytest.raises(UnknownAtom):
        space.atom("nosuch")


def test_marks_only_in_marked_space(space):
    with pytest.raises(UnknownAtom, match="unmark"):
        space.atom("up")
    twin = space.marked_twin()
    assert twin.atom("up") & twin.atom("down") == 0
    assert twin.base is space
    assert space.marked_twin() is twin


def test_unmark_projects_both_marks(space):
    twin = space.marked_twin()
    for f in ("k & ':1'", "vowel & unstressed", "segment"):
        assert twin.unmark_bits(twin.denote(f)) == space.denote(f)
        assert twin.unmark_bits(twin.denote(f) & twin.atom("up")) == space.denote(f)
    assert twin.unmark_bits(twin.atom("skip")) == space.atom("skip")


def test_up_down_mark(space):
    k = space.index(next(s for s in space.symbols if s.phoneme == "k"))
    a = space.index(next(s for s in space.symbols if s.phoneme == "a"))
    assert up_down_mark(space, k, a) == "up"
    assert up_down_mark(space, a, k) == "down"
    assert up_down_mark(space, k, k) == "down"
    with pytest.raises(AlphabetError):
        up_down_mark(space, SKIP, a)


def test_missing_sonority_rejected():
    with pytest.raises(AlphabetError, match="sonority"):
        parse_inventory("x\t\tvowel\n")
    with pytest.raises(AlphabetError):
        PhonemeSpec("x", None)


def test_duplicate_phoneme_rejected():
    with pytest.raises(AlphabetError, match="duplicate"):
        SymbolSpace([PhonemeSpec("a", 5), PhonemeSpec("a", 5)])


def test_parse_inventory_comments():
    inv = parse_inventory("% comment\np\t0\tvoiceless_stop\na\t5\tvowel % trailing\n")
    assert [p.name for p in inv] == ["p", "a"]
    assert inv[1].is_vowel and not inv[0].is_vowel


def test_bundled_inventory_ranks():
    ranks = {p.name: p.sonority for p in load_inventory()}
    assert ranks["k"] < ranks["s"] < ranks["m"] < ranks["l"] < ranks["w"] < ranks["a"]


def test_plain_space_atoms():
    s = plain_space("selog", {":1": "sg"})
    assert s.size == 7
    assert bin(s.atom(":1")).count("1") == 2
    with pytest.raises(AlphabetError):
        plain_space("aa")
