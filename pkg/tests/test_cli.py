import json

import pytest

from core.intersect import set_engine
from main import main


@pytest.fixture
def cli(cache_path, tmp_path, monkeypatch, capsys):
    """Run the CLI in a scratch directory; returns (exit code, stdout lines)."""
    monkeypatch.chdir(tmp_path)

    def run(*argv):
        code = main(list(argv))
        out = capsys.readouterr().out
        return code, [line for line in out.splitlines() if line.strip()]

    yield run
    set_engine(None)


class TestBclass:

    def test_methods_agree(self, cli):
        args = ('bclass', '-g', '1', '-n', '1', '-m', '2', '-d', '3')
        code_fast, fast = cli(*args, '--method', 'fast')
        code_def, definition = cli(*args, '--method', 'def')
        assert code_fast == code_def == 0
        assert fast == definition
        assert json.loads(fast[0])['ambient'] == {"g": 1, "n": 3}

    def test_above_dimension_prints_empty_class(self, cli):
        code, lines = cli('bclass', '-g', '0', '-n', '1', '-m', '2', '-d', '3')
        assert code == 0
        assert json.loads(lines[0])['terms'] == []

    @pytest.mark.parametrize("argv", [
        ('bclass', '-g', '0', '-n', '1', '-m', '1', '-d', '0'),
        ('bclass', '-g', '1', '-n', '2', '-m', '1', '-d', '1'),
        ('bclass', '-g', '1', '-n', '1', '-m', '1', '-d', 'x'),
    ])
    def test_invalid_spec_exits_2(self, cli, argv):
        code, lines = cli(*argv)
        assert code == 2
        assert lines == []

    def test_unknown_method_is_a_usage_error(self, cli):
        with pytest.raises(SystemExit):
            cli('bclass', '-g', '1', '-n', '1', '-m', '1', '-d', '1', '--method', 'slow')


class TestVerify:

    def test_relation_sweep_to_stdout(self, cli, cache_path):
        code, lines = cli('verify', '--check', 'lp', '--g', '1', '--m', '2', '--r', '0')
        assert code == 0
        records = [json.loads(line) for line in lines[:-1]]
        assert {r['status'] for r in records} == {'pass'}
        summary = json.loads(lines[-1])['summary']
        assert summary['total'] == len(records)
        assert summary['exit_code'] == 0

    def test_report_file(self, cli, tmp_path):
        out = tmp_path / 'c1.jsonl'
        code, lines = cli('verify', '--check', 'c1', '--g', '1', '--n', '1', '--m', '2', '--out', str(out))
        assert code == 0
        assert len(lines) == 1
        record = json.loads(out.read_text(encoding='utf-8').splitlines()[0])
        assert record['case'] == 'c1:g=1,n=1,m=2,d=(3)'
        assert record['status'] == 'pass'

    def test_cache_written_after_sweep(self, cli, cache_path):
        cli('verify', '--check', 'lp', '--g', '1', '--m', '2', '--r', '0')
        code, lines = cli('cache', 'stats')
        assert code == 0
        assert json.loads(lines[0])['entries'] > 0

    def test_warm_cache_rerun_is_byte_identical(self, cli, tmp_path):
        shared = str(tmp_path / 'shared.cache')
        cold, warm = tmp_path / 'cold.jsonl', tmp_path / 'warm.jsonl'
        grid = ('verify', '--check', 'c1', '--g', '0-1', '--n', '1-2', '--m', '2', '--cache', shared)

        assert cli(*grid, '--out', str(cold))[0] == 0
        assert (tmp_path / 'shared.cache').exists()
        assert cli(*grid, '--out', str(warm))[0] == 0

        assert cold.read_bytes() == warm.read_bytes()

    @pytest.mark.parametrize("extra", [('--g', '2-1'), ('--jobs', '0'), ('--dcap', '0'), ('--reduced',)])
    def test_bad_options_exit_2(self, cli, extra):
        code, _ = cli('verify', '--check', 'lp', *extra)
        assert code == 2

    def test_unknown_check_is_a_usage_error(self, cli):
        with pytest.raises(SystemExit):
            cli('verify', '--check', 'c9')


class TestCache:

    def test_stats_on_empty_cache(self, cli):
        code, lines = cli('cache', 'stats')
        assert code == 0
        assert json.loads(lines[0])['entries'] == 0

    def test_export_needs_path(self, cli):
        code, _ = cli('cache', 'export')
        assert code == 2

    def test_export_and_merge(self, cli, tmp_path):
        assert cli('oracle', '--max-genus', '1', '--max-points', '3')[0] == 0
        exported = str(tmp_path / 'exported.cache')
        code, lines = cli('cache', 'export', exported)
        assert code == 0
        count = json.loads(lines[0])['exported']
        assert count > 0

        fresh = str(tmp_path / 'fresh.cache')
        code, lines = cli('cache', 'merge', exported, '--cache', fresh)
        assert code == 0
        assert json.loads(lines[0]) == {"merged": count, "entries": count}

        code, lines = cli('cache', 'merge', exported, '--cache', fresh)
        assert json.loads(lines[0])['merged'] == 0

    def test_conflicting_merge_exits_3(self, cli, tmp_path, cache_path):
        with open(cache_path, 'w', encoding='utf-8') as f:
            f.write("1;1;1/24\n")
        other = tmp_path / 'other.cache'
        other.write_text("1;1;1/12\n", encoding='utf-8')
        code, _ = cli('cache', 'merge', str(other))
        assert code == 3


class TestOracle:

    def test_oracle_passes(self, cli):
        code, lines = cli('oracle', '--max-genus', '2', '--max-points', '4')
        assert code == 0
        result = json.loads(lines[0])
        assert result['status'] == 'pass'
        assert result['compared'] > 0 and result['identities'] > 0
