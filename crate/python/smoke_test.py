"""Smoke test for the toric_dvr_py extension module.

Build first with `pip install --no-build-isolation -e crates/python`.
"""

from pathlib import Path

import toric_dvr_py as td

FIXTURES = Path(__file__).resolve().parent.parent / "crates" / "core" / "fixtures"


def main():
    assert td.padic_val("12/5", 2) == 2
    assert td.padic_val("0") is None

    line = td.Bundle.from_file(str(FIXTURES / "p1_rank1.json"))
    assert (line.rank, line.n, line.p) == (1, 1, 2)
    assert line.validate()["status"] == "ok"

    c1 = line.chern(1)
    assert c1["degree"] == 1
    pieces = {tuple(map(tuple, p["cone"])): p["poly"] for p in c1["vertices"][0]["pieces"]}
    assert pieces[((1,),)] == [[[1], "1/1"]]
    assert pieces[((-1,),)] == []

    split = td.Bundle.from_file(str(FIXTURES / "p1_split_rank2.json"))
    assert split.epsilon_oracle([0], 0, ["1/3"]) == "1/1"
    top = split.chern(2)["vertices"][0]["pieces"]
    assert all(p["poly"] == [[[2], "-1/1"]] for p in top)

    assert line.check_morphism(line, [["2/1"]])["holds"] is True
    assert line.check_morphism(line, [["1/2"]])["holds"] is False

    bad = td.Bundle.from_file(str(FIXTURES / "p1_mismatched.json"))
    assert bad.validate()["status"] == "failed"

    try:
        td.Bundle('{"p": 4}')
    except td.InputError:
        pass
    else:
        raise AssertionError("composite p accepted")

    code, doc = td.run(["chern", "--i", "1", str(FIXTURES / "p1_rank1.json")])
    assert code == 0 and doc["class"]["degree"] == 1

    print("smoke test passed")


if __name__ == "__main__":
    main()
