import io
import subprocess
import sys

import pytest

from nfbench.cli import run

from conftest import DATA


def call(*argv):
    out = io.StringIO()
    code = run([str(a) for a in argv], stdout=out)
    return code, out.getvalue()


def lines(*argv):
    code, text = call(*argv, "--format", "lines")
    return code, text.splitlines()


# ------------------------------------------------------------- goldens

def test_stratify_russell():
    assert lines("stratify", DATA / "russell.fol") == (1, [
        "verdict=unstratified\toffset=1",
        "atom=x mem x\tsrc=x\tdst=x\tdelta=1",
    ])
    code, text = call("stratify", DATA / "russell.fol")
    assert code == 1 and "x mem x" in text


def test_stratify_success():
    assert lines("stratify", DATA / "complements_body.fol") == (0, [
        "verdict=stratified", "var=x\tlevel=1", "var=y\tlevel=1", "var=z\tlevel=0",
    ])


def test_axioms_two_cycle():
    code, out = lines("axioms", DATA / "twocycle.ms", "--flavor", "memf")
    assert code == 1
    assert out == [
        "axiom=COMPLEMENTS\tflavor=memf\tverdict=holds\twitnesses=(a)->b;(b)->a",
        "axiom=PAIRING\tflavor=memf\tverdict=fails\tcounterexample=(a,b)",
        "axiom=SET_UNION\tflavor=memf\tverdict=holds\twitnesses=(a)->b;(b)->a",
        "axiom=U_COMPOSITION\tflavor=memf\tverdict=fails\tcounterexample=(a,b)",
        "axiom=U_INTERSECTION\tflavor=memf\tverdict=fails\tcounterexample=()",
        "axiom=EXTENSIONALITY\tflavor=memf\tverdict=holds\tscope=all",
    ]


def test_axioms_default_flavor_follows_f_mode():
    assert lines("axioms", DATA / "twocycle.ms")[1][0].startswith("axiom=COMPLEMENTS\tflavor=memf")


def test_eval_verdicts():
    f = DATA / "complements_memf.fol"
    assert lines("eval", DATA / "twocycle.ms", f, "--assign", "x=a", "--assign", "y=b") == (0, ["verdict=true"])
    assert lines("eval", DATA / "twocycle.ms", f, "--assign", "x=a", "--assign", "y=a") == (1, ["verdict=false"])


def test_witness_complement_trace():
    code, out = lines("witness", DATA / "v3.ms", "--axiom", "COMPLEMENTS", "--inputs", "0")
    assert code == 0
    assert out[0] == "step=f(x)\tobject={}"
    assert out[-2] == "step=witness\tobject={{},{{}}}"
    assert out[-1] == "verdict=validated\twitness=3\trecipe=j"


def test_witness_pair():
    assert lines("witness", DATA / "v3.ms", "--axiom", "PAIRING", "--inputs", "0", "1")[1][-1] == \
        "verdict=validated\twitness=3\trecipe=j"


def test_witness_recipe_error_is_negative():
    code, out = lines("witness", DATA / "v3_partial.ms", "--axiom", "COMPLEMENTS", "--inputs", "0")
    assert code == 1
    assert out[-1] == "verdict=error\tkind=outside-range\tstep=f^-1(j(k^c))"


def test_search_output():
    code, text = call("search", "--size", "2", "--total", "--injective", "--axioms", "COMPLEMENTS,EXT@sets")
    assert code == 0
    assert text == "# verdict: FOUND examined=3\ndomain: a b\nfset: a -> {}\nfset: b -> {a, b}\n"


def test_search_exhausted():
    code, text = call("search", "--size", "0", "--axioms", "U_INTERSECTION")
    assert (code, text) == (1, "# verdict: EXHAUSTED examined=1\n")


def test_cantor():
    assert lines("cantor", "--max-n", "2") == (0, [
        "n=1\tmaps=2\tsurjections=0\tmin_missing=1\tdiagonal_missing=true",
        "n=2\tmaps=16\tsurjections=0\tmin_missing=2\tdiagonal_missing=true",
    ])


def test_translate():
    assert lines("translate", DATA / "complements_body.fol", "--to", "mem'", "--guard", "D") == (
        0, ["forall z. (D(z) -> (z mem' y <-> ~(z mem' x)))"])


def test_encode_both_ways():
    assert call("encode", "{{},{{}}}") == (0, "3\n")
    assert call("encode", "--code", "3") == (0, "{{},{{}}}\n")


def test_transposition():
    assert lines("transposition", "--n", "3") == (0, [
        "n=3\tautomorphism_witness=({},{{}})\tj_rejected=true\tpair_sets=1024"
        "\tdownward_mismatches=0\tupward_mismatches=0",
    ])


# ---------------------------------------------------------- error paths

@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["stratify"],
    ["stratify", "/no/such/file.fol"],
    ["eval", str(DATA / "twocycle.ms"), str(DATA / "complements_memf.fol")],  # y unassigned
    ["eval", str(DATA / "twocycle.ms"), str(DATA / "complements_memf.fol"), "--assign", "oops"],
    ["axioms", str(DATA / "russell.fol")],  # not a structure file
    ["witness", str(DATA / "v3.ms"), "--axiom", "PAIRING", "--inputs", "0"],
    ["witness", str(DATA / "v3.ms"), "--axiom", "EXT"],
    ["witness", str(DATA / "twocycle.ms"), "--axiom", "COMPLEMENTS", "--inputs", "a"],
    ["search", "--size", "5"],
    ["search", "--size", "1", "--axioms", "NOPE"],
    ["cantor", "--max-n", "9"],
    ["translate", str(DATA / "complements_body.fol"), "--to", "bogus"],
    ["encode"],
    ["encode", "{{}"],
    ["transposition", "--n", "7"],
])
def test_errors_exit_two(argv, capsys):
    code, _ = call(*argv)
    assert code == 2
    assert capsys.readouterr().err  # argparse usage or an "error:" line


def test_help_exits_zero(capsys):
    assert call("--help")[0] == 0
    assert "stratify" in capsys.readouterr().out


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "nfbench", "encode", "--code", "1"],
                          capture_output=True, text=True)
    assert (proc.returncode, proc.stdout) == (0, "{{}}\n")
