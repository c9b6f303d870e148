import pytest

from performance import PerformanceMonitor, SearchPool


def _square(x):
    return x * x


def test_inline_pool_keeps_order():
    with SearchPool(1) as pool:
        assert pool.executor is None
        assert pool.map_partitions(_square, range(5)) == [0, 1, 4, 9, 16]
        stats = pool.get_stats()
    assert stats == {'max_workers': 1, 'tasks_submitted': 5, 'tasks_completed': 5, 'inline': True}


def test_worker_count_is_clamped():
    pool = SearchPool(0)
    assert pool.max_workers == 1
    pool.shutdown()


def test_process_pool_matches_inline():
    with SearchPool(2) as pool:
        assert pool.map_partitions(_square, range(20)) == [x * x for x in range(20)]
    assert pool.executor is None


def test_pool_propagates_errors():
    with SearchPool(1) as pool:
        with pytest.raises(ZeroDivisionError):
            pool.map_partitions(lambda x: 1 // x, [1, 0])
        assert pool.tasks_completed == 0


def test_monitor_stages_accumulate():
    monitor = PerformanceMonitor()
    with monitor.stage('search'):
        pass
    with monitor.stage('search'):
        pass
    with pytest.raises(RuntimeError):
        with monitor.stage('broken'):
            raise RuntimeError("boom")
    monitor.record_items('order_4', 7040)
    stats = monitor.get_system_stats()
    assert set(stats['stages']) == {'search', 'broken'}
    assert stats['items'] == {'order_4': 7040}
    assert stats['errors'] == 1
    monitor.log_summary()
