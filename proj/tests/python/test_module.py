import jsonschema
import pytest

import obstower


def test_selftest_passes():
    report = obstower.run("selftest", {"schema": "obstower-spec/1", "kind": "selftest"})
    assert report["results"]["all_pass"]
    assert report["tool"]["version"] == obstower.__version__


def test_examples_validate_and_run(specs, schemas):
    assert len(specs) >= 6
    for name, spec in specs.items():
        jsonschema.validate(spec, schemas["spec"])
        report = obstower.run(spec["kind"], spec)
        jsonschema.validate(report, schemas["report"])
        assert report["command"] == spec["kind"], name


def test_blocked_and_lifting_towers(specs):
    blocked = obstower.run("tower", specs["q8_tower_blocked"])["results"]["run"]
    assert blocked["blocked_at"] == 2
    assert not blocked["completed"]
    lifts = obstower.run("tower", specs["q8_tower_lifts"])["results"]["run"]
    assert lifts["completed"]


def test_jobs_do_not_change_results(specs):
    spec = specs["simplicial_suite"]
    one = obstower.run(spec["kind"], spec, jobs=1)
    four = obstower.run(spec["kind"], spec, jobs=4)
    assert one["report_sha256"] == four["report_sha256"]


def test_direct_functions():
    assert obstower.witt_rank(2, 6) == 9
    assert len(obstower.hall_basis([1, 1], 5)) == 6
    assert obstower.modular_h1(10) == {11: 2, 22: 1}
    dims, flag = obstower.ls_weights(-1, 10, 1)
    assert dims == {1: 22, 4: 3, 6: 5, 8: 7, 10: 9, 12: 11} and flag
    assert obstower.group_cohomology("Q8", [2], 2) == [2, 2]
    assert obstower.group_cohomology("C4", [4], 3) == [4]


def test_errors_carry_exit_codes(schemas):
    with pytest.raises(obstower.ObstowerError) as bad:
        obstower.run("cohomology", {"schema": "obstower-spec/1", "kind": "cohomology", "nonsense": 1})
    assert bad.value.exit_code == 2
    spec = {"schema": "obstower-spec/1", "kind": "cohomology",
            "module": {"group": {"cyclic": 100000}, "factors": [2]}, "degrees": [1]}
    with pytest.raises(obstower.ObstowerError) as big:
        obstower.run("cohomology", spec)
    assert big.value.exit_code == 3
    with pytest.raises(obstower.ObstowerError) as small:
        obstower.run("cohomology", {**spec, "module": {"group": {"cyclic": 100}, "factors": [2]}},
                     budget_profile="small")
    assert small.value.exit_code == 3
    with pytest.raises(obstower.ObstowerError):
        obstower.group_cohomology("no such group", [2], 1)
    with pytest.raises(obstower.ObstowerError) as prof:
        obstower.run("selftest", {"schema": "obstower-spec/1", "kind": "selftest"}, budget_profile="huge")
    assert prof.value.exit_code == 2
