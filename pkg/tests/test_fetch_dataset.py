import pytest
import requests

from Corpus_Audit.errors import FetchError
from Corpus_Audit.fetching.fetch_dataset import DatasetFetcher, main

CONFIG = {
    "base_url": "",
    "timeout": 1,
    "max_retries": 2,
    "retry_delay": 0,
    "user_agent": "test-agent",
    "splits": ["test", "valid"],
    "languages": ["java", "cpp", "python"],
    "file_pattern": "transcoder_{split}.{language}.tok",
}


@pytest.fixture
def fetcher(tmp_path):
    return DatasetFetcher("https://example.org/data/", CONFIG, tmp_path)


def response(content=b"int a ;\n", status=200):
    result = requests.Response()
    result.status_code = status
    result._content = content
    return result


def test_requires_a_base_url(tmp_path):
    with pytest.raises(FetchError, match="base URL"):
        DatasetFetcher(None, CONFIG, tmp_path)


def test_lists_six_files(fetcher):
    names = [item.name for item in fetcher.files()]
    assert len(names) == 6
    assert names[0] == "transcoder_test.java.tok"
    assert names[-1] == "transcoder_valid.python.tok"


def test_session_user_agent(fetcher):
    assert fetcher.session.headers["User-Agent"] == "test-agent"


def test_download_writes_file(fetcher, mocker, tmp_path):
    get = mocker.patch.object(fetcher.session, "get", return_value=response())
    target = fetcher.download(fetcher.files()[0])
    assert target == tmp_path / "transcoder_test.java.tok"
    assert target.read_bytes() == b"int a ;\n"
    get.assert_called_once_with("https://example.org/data/transcoder_test.java.tok", timeout=1)


def test_download_skips_existing_files(fetcher, mocker, tmp_path):
    (tmp_path / "transcoder_test.java.tok").write_bytes(b"cached")
    get = mocker.patch.object(fetcher.session, "get")
    fetcher.download(fetcher.files()[0])
    get.assert_not_called()


def test_download_retries_then_succeeds(fetcher, mocker):
    get = mocker.patch.object(fetcher.session, "get", side_effect=[requests.ConnectionError("reset"), response(b"ok")])
    assert fetcher.download(fetcher.files()[1]).read_bytes() == b"ok"
    assert get.call_count == 2


def test_download_gives_up(fetcher, mocker):
    get = mocker.patch.object(fetcher.session, "get", return_value=response(b"", status=404))
    with pytest.raises(FetchError, match="cannot download"):
        fetcher.download(fetcher.files()[2])
    assert get.call_count == 2


def test_fetch_all(fetcher, mocker):
    mocker.patch.object(fetcher.session, "get", return_value=response())
    assert len(fetcher.fetch_all()) == 6


def test_main_without_base_url(tmp_path, capsys):
    config = tmp_path / "fetch.yaml"
    config.write_text("base_url: ''\n", encoding="utf-8")
    assert main(["--config", str(config), "--data-dir", str(tmp_path)]) == 2
    assert capsys.readouterr().err.startswith("ERROR FETCH:")
