"""Download the published test and validation files into ``data/``."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import requests
from retry.api import retry_call
from tqdm import tqdm

from Corpus_Audit.errors import AuditError, FetchError
from Corpus_Audit.utils import config_path, load_config_yaml

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DatasetFile:
    """One published split file."""

    split: str
    language: str
    name: str


class DatasetFetcher:
    """Fetch the split files listed in ``fetching_config``."""

    def __init__(self, base_url: str | None = None, config: dict[str, Any] | None = None, data_dir: str | Path | None = None):
        """
        Set up the HTTP session.

        Args:
            base_url (str | None): Directory URL of the files; overrides the config value.
            config (dict | None): Fetch configuration; defaults to the bundled one.
            data_dir (str | Path | None): Destination directory; overrides the config value.
        """
        self.config = config if config is not None else load_config_yaml(config_path("fetching"))
        self.base_url = (base_url or self.config.get("base_url") or "").rstrip("/")
        if not self.base_url:
            msg = "no base URL configured; pass --base-url"
            raise FetchError(msg)
        self.data_dir = Path(data_dir or self.config.get("data_dir", "data"))
        self.timeout = self.config.get("timeout", 30)
        self.max_retries = self.config.get("max_retries", 3)
        self.retry_delay = self.config.get("retry_delay", 5)

        self.session = requests.Session()
        self.session.headers.update({"User-Agent": self.config.get("user_agent", "corpus-audit")})

    def files(self) -> list[DatasetFile]:
        """List the files to fetch, splits first then languages."""
        pattern = self.config.get("file_pattern", "transcoder_{split}.{language}.tok")
        return [
            DatasetFile(split, language, pattern.format(split=split, language=language))
            for split in self.config.get("splits", ["test", "valid"])
            for language in self.config.get("languages", ["java", "cpp", "python"])
        ]

    def _get(self, url: str) -> bytes:
        response = self.session.get(url, timeout=self.timeout)
        response.raise_for_status()
        return response.content

    def download(self, dataset_file: DatasetFile, *, overwrite: bool = False) -> Path:
        """
        Download one file, retrying transient failures.

        Returns
        -------
            Path: Where the file was written.

        Raises
        ------
            FetchError: when every attempt fails.
        """
        target = self.data_dir / dataset_file.name
        if target.exists() and not overwrite:
            logger.info("Skipping %s, already present", target)
            return target
        url = f"{self.base_url}/{dataset_file.name}"
        try:
            content = retry_call(
                self._get,
                fargs=[url],
                exceptions=requests.RequestException,
                tries=self.max_retries,
                delay=self.retry_delay,
                backoff=2,
                logger=logger,
            )
        except requests.RequestException as e:
            msg = f"cannot download {url}: {e}"
            raise FetchError(msg) from e
        self.data_dir.mkdir(parents=True, exist_ok=True)
        target.write_bytes(content)
        logger.info("Saved %s (%s bytes)", target, len(content))
        return target

    def fetch_all(self, *, overwrite: bool = False) -> list[Path]:
        """Download every configured file."""
        return [self.download(dataset_file, overwrite=overwrite) for dataset_file in tqdm(self.files(), desc="fetch", unit="file", file=sys.stderr)]


def main(argv: list[str] | None = None) -> int:
    """Command-line entry point of the fetch script."""
    logging.basicConfig(level=logging.INFO, format="%(asctime)s - %(levelname)s - %(message)s", handlers=[logging.StreamHandler(sys.stderr)])
    parser = argparse.ArgumentParser(description="Download the published test and validation files")
    parser.add_argument("--base-url", help="URL of the directory holding the files")
    parser.add_argument("--data-dir", type=Path, help="Destination directory (default: data)")
    parser.add_argument("--config", type=Path, help="Fetch config YAML")
    parser.add_argument("--overwrite", action="store_true", help="Download files that already exist")
    args = parser.parse_args(argv)

    try:
        config = load_config_yaml(args.config or config_path("fetching"))
        fetcher = DatasetFetcher(args.base_url, config, args.data_dir)
        fetcher.fetch_all(overwrite=args.overwrite)
    except AuditError as e:
        sys.stderr.write(f"ERROR {e.code}: {e}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
