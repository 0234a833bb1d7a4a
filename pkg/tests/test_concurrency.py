import json
from concurrent.futures import ThreadPoolExecutor

from k3cm.analysis import analyze_type
from k3cm.k3type import extract_type


def test_parallel_analysis_is_consistent():
    # values are immutable and operations pure: concurrent full analyses of
    # the same surface must agree with each other and with a serial run
    t = extract_type([[8, 0], [0, 8]])
    serial = json.dumps(analyze_type(t), sort_keys=True)
    with ThreadPoolExecutor(max_workers=8) as pool:
        results = list(pool.map(lambda _: analyze_type(t), range(16)))
    assert all(json.dumps(r, sort_keys=True) == serial for r in results)


def test_parallel_distinct_fields():
    grams = [[[2, 1], [1, 4]], [[8, 0], [0, 8]], [[2, 1], [1, 2]], [[2, 1], [1, 6]]]

    def degree_of(gram):
        return analyze_type(extract_type(gram))["class_field_degree"]

    with ThreadPoolExecutor(max_workers=4) as pool:
        parallel = list(pool.map(degree_of, grams * 3))
    serial = [degree_of(g) for g in grams * 3]
    assert parallel == serial
