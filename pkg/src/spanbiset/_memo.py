"""Shared registry for the construction memo caches.

Caches are keyed by object identity (constructions are deterministic, and
the verification suites revisit the same squares and composites many
times).  Entries hold strong references, so long-running drivers clear
them between cases via clear_caches().
"""

_registry = []


def register(cache: dict) -> dict:
    _registry.append(cache)
    return cache


def clear_caches():
    for cache in _registry:
        cache.clear()


def memo1(cache, key_obj, build, extra_key=None):
    """Identity-keyed memo for a single-object key (plus an optional
    hashable discriminator)."""
    key = (id(key_obj), extra_key)
    hit = cache.get(key)
    if hit is not None and hit[0] is key_obj:
        return hit[1]
    val = build()
    cache[key] = (key_obj, val)
    return val


def memo2(cache, a, b, build, extra_key=None):
    key = (id(a), id(b), extra_key)
    hit = cache.get(key)
    if hit is not None and hit[0] is a and hit[1] is b:
        return hit[2]
    val = build()
    cache[key] = (a, b, val)
    return val
