import pytest
from fastapi.testclient import TestClient

from ruletag.pipeline import parse_tsv, score_against_gold
from ruletag.service import create_app


@pytest.fixture()
def client(weak_rules, sample_lexicon):
    return TestClient(create_app(weak_rules, sample_lexicon))


@pytest.fixture()
def session(client, sample_text):
    response = client.post("/sessions", json={"text": sample_text})
    assert response.status_code == 201
    return response.json()


class TestSessionLifecycle:
    def test_create_reports_pending(self, session):
        assert session["pending_count"] == 3

    def test_pending_lists_candidates_in_document_order(self, client, session):
        items = client.get(f"/sessions/{session['session_id']}/pending").json()["items"]
        assert [item["surface"] for item in items] == ["bulunan", "derin", "en"]
        derin = items[1]
        assert len(derin["candidates"]) == 5
        assert derin["candidates"][1]["display"] == "ADJ(derin)"
        assert "canonical" in derin["candidates"][0]
        assert derin["context"][derin["token_index"]] == "derin"

    def test_resolving_all_yields_gold_tagging(
        self, client, session, sample_gold_text
    ):
        sid = session["session_id"]
        items = client.get(f"/sessions/{sid}/pending").json()["items"]
        remaining = len(items)
        for item in items:
            response = client.post(
                f"/sessions/{sid}/choices",
                json={
                    "sentence_index": item["sentence_index"],
                    "token_index": item["token_index"],
                    "parse_index": 1,
                },
            )
            assert response.status_code == 200
            remaining -= 1
            assert response.json()["remaining"] == remaining
        result = client.get(f"/sessions/{sid}/result")
        assert result.status_code == 200
        body = result.json()
        tagged = parse_tsv(body["tsv"])
        gold = parse_tsv(sample_gold_text)
        assert score_against_gold(tagged, gold) == 1.0
        assert body["stats"]["method_counts"]["user"] == 3

    def test_result_refused_while_pending(self, client, session):
        response = client.get(f"/sessions/{session['session_id']}/result")
        assert response.status_code == 409

    def test_sessions_isolated(self, client, sample_text, session):
        other = client.post("/sessions", json={"text": sample_text}).json()
        sid = session["session_id"]
        items = client.get(f"/sessions/{sid}/pending").json()["items"]
        client.post(
            f"/sessions/{sid}/choices",
            json={
                "sentence_index": items[0]["sentence_index"],
                "token_index": items[0]["token_index"],
                "parse_index": 1,
            },
        )
        untouched = client.get(f"/sessions/{other['session_id']}/pending").json()
        assert untouched["remaining"] == 3


class TestErrors:
    def test_unknown_session(self, client):
        assert client.get("/sessions/nope/pending").status_code == 404
        assert client.get("/sessions/nope/result").status_code == 404

    def test_out_of_range_parse_index(self, client, session):
        sid = session["session_id"]
        item = client.get(f"/sessions/{sid}/pending").json()["items"][0]
        response = client.post(
            f"/sessions/{sid}/choices",
            json={
                "sentence_index": item["sentence_index"],
                "token_index": item["token_index"],
                "parse_index": 99,
            },
        )
        assert response.status_code == 400
        assert client.get(f"/sessions/{sid}/pending").json()["remaining"] == 3

    def test_choice_for_non_pending_token(self, client, session):
        sid = session["session_id"]
        response = client.post(
            f"/sessions/{sid}/choices",
            json={"sentence_index": 0, "token_index": 0, "parse_index": 0},
        )
        assert response.status_code == 404

    def test_duplicate_choice_is_acknowledged_noop(self, client, session):
        sid = session["session_id"]
        item = client.get(f"/sessions/{sid}/pending").json()["items"][0]
        body = {
            "sentence_index": item["sentence_index"],
            "token_index": item["token_index"],
            "parse_index": 1,
        }
        first = client.post(f"/sessions/{sid}/choices", json=body)
        second = client.post(f"/sessions/{sid}/choices", json=body)
        assert second.status_code == 200
        assert second.json()["duplicate"] is True
        assert second.json()["remaining"] == first.json()["remaining"]

    def test_conflicting_rechoice_rejected(self, client, session):
        sid = session["session_id"]
        item = client.get(f"/sessions/{sid}/pending").json()["items"][0]
        body = {
            "sentence_index": item["sentence_index"],
            "token_index": item["token_index"],
            "parse_index": 1,
        }
        client.post(f"/sessions/{sid}/choices", json=body)
        body["parse_index"] = 0
        assert client.post(f"/sessions/{sid}/choices", json=body).status_code == 409


class TestReplayDeterminism:
    def test_service_path_equals_answers_script(
        self, client, sample_text, tmp_path, sample_gold_text
    ):
        from ruletag import data_path
        from ruletag.cli import main

        sid = client.post("/sessions", json={"text": sample_text}).json()["session_id"]
        items = client.get(f"/sessions/{sid}/pending").json()["items"]
        for item in items:
            client.post(
                f"/sessions/{sid}/choices",
                json={
                    "sentence_index": item["sentence_index"],
                    "token_index": item["token_index"],
                    "parse_index": 1,
                },
            )
        service_tsv = client.get(f"/sessions/{sid}/result").json()["tsv"]

        answers = tmp_path / "answers.txt"
        answers.write_text(
            "".join(f"{item['surface']}\t1\n" for item in items), encoding="utf-8"
        )
        out = tmp_path / "out.tsv"
        weak = __file__.rsplit("/", 1)[0] + "/data/weak.mr"
        code = main([
            "tag", "--rules", weak,
            "--lexicon", str(data_path("turkish_sample.lex")),
            "--input", str(data_path("turkish_sample.txt")),
            "--output", str(out),
            "--policy", "interactive", "--answers", str(answers),
        ])
        assert code == 0
        assert out.read_text(encoding="utf-8") == service_tsv
