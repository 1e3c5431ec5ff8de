"""Per-criterion PASS/FAIL lines collected while the acceptance tests run."""

import functools

RESULTS: dict[int, str] = {}


def criterion(number: int, title: str):
    def wrap(test):
        @functools.wraps(test)
        def run(*args, **kwargs):
            try:
                test(*args, **kwargs)
            except BaseException as exc:
                reason = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
                line = f"criterion {number:2d}: FAIL  {title}  ({reason})"
                RESULTS[number] = line
                print(line)
                raise
            line = f"criterion {number:2d}: PASS  {title}"
            RESULTS[number] = line
            print(line)

        return run

    return wrap
