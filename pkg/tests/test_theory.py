import pytest
from hypothesis import given, strategies as st

from pcgen.bitcodec import lex_words
from pcgen.folang import BEGINS_WITH_1, BIT_J_IS_1, EVEN_LENGTH, SIGMA1_REF, all_templates, build_phi_w, make_template
from pcgen.theory import (
    CertBackend,
    EmptyBackend,
    Proof,
    cert_begins,
    cert_bit_j,
    cert_exhaust,
    get_backend,
    search_proof,
    soundness_audit,
)

CERT = CertBackend()
B1 = make_template(BEGINS_WITH_1)
EL = make_template(EVEN_LENGTH)


def test_cert_examples():
    assert CERT.verify(build_phi_w(B1, "0110"), Proof(cert_begins()))
    bj1 = make_template(BIT_J_IS_1, 1)
    assert CERT.verify(build_phi_w(bj1, "00"), cert_bit_j(1))
    assert not CERT.verify(build_phi_w(bj1, "00"), cert_bit_j(0))
    s = build_phi_w(B1, "1000")
    for length in range(0, 9):
        assert not any(CERT.verify(s, p) for p in lex_words(length))


def test_malformed_certificates_rejected():
    s = build_phi_w(B1, "0110")
    for p in ["", "0", "000", "11", "111111", "01000"]:
        assert CERT.verify(s, p) is False


def test_exhaustion_certificate():
    s1 = make_template(SIGMA1_REF, "begins-with-1")
    assert CERT.verify(build_phi_w(s1, "011"), cert_exhaust(3))
    assert not CERT.verify(build_phi_w(s1, "011"), cert_exhaust(2))  # B < |w|
    assert not CERT.verify(build_phi_w(s1, "10"), cert_exhaust(5))
    has1 = make_template(SIGMA1_REF, "has-a-1-bit")
    # below the stabilization length a finite sweep proves nothing
    assert not CERT.verify(build_phi_w(has1, "0000"), cert_exhaust(4))


def test_search_examples():
    assert search_proof(CERT, build_phi_w(B1, "0000"), 32) == Proof("00")
    assert search_proof(CERT, build_phi_w(B1, "1000"), 32) is None
    assert search_proof(CERT, build_phi_w(B1, "0000"), 0) is None
    assert search_proof(EmptyBackend(), build_phi_w(B1, "0000"), 32) is None


@given(st.sampled_from(all_templates()), st.text(alphabet="01", min_size=1, max_size=5),
       st.integers(0, 12), st.integers(0, 12))
def test_search_monotone_and_reverifies(phi, w, b1, b2):
    lo, hi = sorted((b1, b2))
    s = build_phi_w(phi, w)
    p = search_proof(CERT, s, lo)
    if p is not None:
        assert CERT.verify(s, p) and p.size <= lo
        assert search_proof(CERT, s, hi) == p


def test_pruned_search_equals_full_sweep():
    for phi in all_templates():
        for w in ["0", "01", "110", "0000"]:
            s = build_phi_w(phi, w)
            full = next((p for m in range(7) for p in lex_words(m) if CERT.verify(s, p)), None)
            found = search_proof(CERT, s, 6)
            assert (found.payload if found else None) == full


def test_audit_examples():
    r = soundness_audit(CERT, [build_phi_w(B1, w) for w in lex_words(4)], 64)
    assert r.ok and r.checked == 16 and r.proofs == 8
    r = soundness_audit(CERT, [build_phi_w(EL, w) for w in lex_words(3)], 64)
    assert r.ok and r.proofs == 0
    r = soundness_audit(CERT, [], 64)
    assert r.ok and r.checked == 0


def test_audit_full_cross_product():
    samples = [build_phi_w(phi, w) for phi in all_templates() for c in range(1, 6) for w in lex_words(c)]
    r = soundness_audit(CERT, samples, 64, horizon=12)
    assert r.ok, r.violations
    assert r.proofs > 0


def test_backend_lookup():
    assert get_backend("cert") == CERT
    with pytest.raises(ValueError):
        get_backend("zfc")


@pytest.mark.parametrize("kind,param,w,payload,accepted", [
    (BEGINS_WITH_1, 0, "0110", "00", True),
    (BEGINS_WITH_1, 0, "1000", "00", False),
    (BIT_J_IS_1, 2, "1101", "01010", True),
    (BIT_J_IS_1, 2, "1101", "01011", False),
    (SIGMA1_REF, "begins-with-11", "0111", "100100", True),
    (SIGMA1_REF, "has-a-1-bit", "0000", "101000", False),
])
def test_documented_cert_examples(kind, param, w, payload, accepted):
    s = build_phi_w(make_template(kind, param), w)
    assert CertBackend().verify(s, payload) is accepted
