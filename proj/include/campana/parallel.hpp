#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace campana::parallel {

/// Worker cap for internal parallel loops; 0 means hardware concurrency.
void set_threads(unsigned n);
unsigned threads();

/// Runs body(chunk) for chunk in [0, chunks) on up to threads() workers.
/// Chunking is fixed by the caller, so any per-chunk results reduced in
/// chunk order are independent of the worker count.
void for_chunks(std::size_t chunks, const std::function<void(std::size_t)>& body);

/// Per-chunk results collected into a vector indexed by chunk.
template <class T, class F>
std::vector<T> map_chunks(std::size_t chunks, F&& f) {
  std::vector<T> out(chunks);
  for_chunks(chunks, [&](std::size_t c) { out[c] = f(c); });
  return out;
}

}  // namespace campana::parallel
