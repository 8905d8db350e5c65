import json

import pytest

from bocl.ast import ast_from_json
from bocl.cli import main
from bocl.parser import parse_constraint


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


def test_check_golden_model(model_path, capsys):
    code = main(["check", str(model_path)])
    out = capsys.readouterr().out.splitlines()
    assert code == 0
    assert out == ["BookPageNumber: OK", "LibaryCollect: OK"]


def test_check_reports_syntax_error(tmp_path, model_doc, capsys):
    model_doc["constraints"][0]["expression"] = "context Book inv: self.pages >"
    path = write(tmp_path, "m.json", model_doc)
    code = main(["check", path])
    captured = capsys.readouterr()
    assert code == 2
    assert "syntax error" in captured.err
    assert "1:31" in captured.err  # positioned at the missing operand
    # The healthy constraint still reports OK.
    assert "LibaryCollect: OK" in captured.out


def test_check_reports_resolution_error(tmp_path, model_doc, capsys):
    model_doc["constraints"][0]["expression"] = "context Book inv x: self.pagecount > 0"
    path = write(tmp_path, "m.json", model_doc)
    code = main(["check", path])
    assert code == 2
    assert "pagecount" in capsys.readouterr().err


def test_check_emit_ast(tmp_path, model_path, model_doc, capsys):
    out_dir = tmp_path / "out"
    code = main(["check", str(model_path), "--emit-ast", str(out_dir)])
    assert code == 0
    files = sorted(p.name for p in out_dir.glob("*.json"))
    # One file per constraint in the golden model.
    assert len(files) == len(model_doc["constraints"])
    assert files == ["BookPageNumber.json", "LibaryCollect.json"]
    doc = json.loads((out_dir / "BookPageNumber.json").read_text())
    assert doc["schemaVersion"] == "bocl-ast/1"
    expected = parse_constraint(model_doc["constraints"][0]["expression"])
    assert ast_from_json(doc) == expected


def test_check_missing_model(tmp_path, capsys):
    code = main(["check", str(tmp_path / "nope.json")])
    assert code == 2
    assert "NotFound" in capsys.readouterr().err


def test_eval_golden_corpus(model_path, objects_path, capsys):
    code = main(["eval", str(model_path), str(objects_path)])
    captured = capsys.readouterr()
    assert code == 0
    assert captured.out.splitlines() == [
        "Invariant:context Book inv pageNumberInv: self.pages>0:True",
        "Invariant:context Library inv atLeastOneSmallBook: "
        "self.contains->select(i_book : Book | i_book.pages <= 110)->size()>0:True",
    ]


def test_eval_false_exit_code(tmp_path, model_path, objects_doc, capsys):
    for obj in objects_doc["objects"]:
        if obj["name"] == "book_obj":
            obj["slots"]["pages"] = 0
    path = write(tmp_path, "o.json", objects_doc)
    code = main(["eval", str(model_path), path])
    captured = capsys.readouterr()
    assert code == 1
    assert "Invariant:context Book inv pageNumberInv: self.pages>0:False" in captured.out


def test_eval_missing_objects_file(tmp_path, model_path, capsys):
    code = main(["eval", str(model_path), str(tmp_path / "ghost.json")])
    assert code == 2
    assert "NotFound" in capsys.readouterr().err


def test_eval_error_exit_code(tmp_path, model_doc, objects_path, capsys):
    model_doc["constraints"][0]["expression"] = "context Book inv q: 1/0 = 1"
    path = write(tmp_path, "m.json", model_doc)
    code = main(["eval", path, str(objects_path)])
    captured = capsys.readouterr()
    assert code == 2
    assert "Error(Exception Occured! Info: division by zero)" in captured.out


def test_eval_json_format(model_path, objects_path, capsys):
    code = main(["eval", str(model_path), str(objects_path), "--format", "json"])
    captured = capsys.readouterr()
    assert code == 0
    doc = json.loads(captured.out)
    assert [r["overall"] for r in doc["results"]] == ["True", "True"]


def test_eval_warnings_go_to_stderr(tmp_path, model_path, objects_doc, capsys):
    # Remove the author link: writedBy is 1..*, so a count warning appears.
    objects_doc["links"] = [
        l for l in objects_doc["links"] if l["association"] != "book_author_assoc"
    ]
    path = write(tmp_path, "o.json", objects_doc)
    code = main(["eval", str(model_path), path])
    captured = capsys.readouterr()
    assert code == 0  # neither constraint involves writedBy
    assert "warning" in captured.err
    assert "writedBy" in captured.err
    assert "warning" not in captured.out


def test_unsupported_stereotype_via_eval(tmp_path, model_doc, objects_path, capsys):
    model_doc["constraints"][0]["expression"] = "context Book pre q: self.pages > 0"
    path = write(tmp_path, "m.json", model_doc)
    code = main(["eval", path, str(objects_path)])
    captured = capsys.readouterr()
    assert code == 2
    assert "unsupported stereotype" in captured.out


def test_unsupported_stereotype_via_check(tmp_path, model_doc, capsys):
    model_doc["constraints"][1]["expression"] = "context Library post q: true"
    path = write(tmp_path, "m.json", model_doc)
    code = main(["check", path])
    captured = capsys.readouterr()
    assert code == 2
    assert "unsupported stereotype" in captured.err


def test_usage_error_exits_two():
    with pytest.raises(SystemExit) as exc:
        main(["eval", "only-one-arg.json"])
    assert exc.value.code == 2
