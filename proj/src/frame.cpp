#include "nrw/frame.hpp"

#include "nrw/error.hpp"

namespace nrw {

Frame::Frame(std::vector<std::string> labels) : m_labels(std::move(labels)) {
  for (int i = 0; i < dim(); ++i) {
    if (!m_index.emplace(m_labels[i], i).second)
      throw Error("LabelCollision", "duplicate basis label '" + m_labels[i] + "'");
  }
}

const std::string& Frame::label(int i) const {
  if (i < 0 || i >= dim()) throw Error("IndexOutOfRange", "basis index " + std::to_string(i));
  return m_labels[i];
}

int Frame::index_of(const std::string& label) const {
  auto it = m_index.find(label);
  return it == m_index.end() ? -1 : it->second;
}

std::string Frame::fingerprint() const {
  std::string s;
  for (int i = 0; i < dim(); ++i) {
    if (i) s += ',';
    s += m_labels[i];
  }
  return s;
}

FramePtr make_frame(std::vector<std::string> labels) {
  return std::make_shared<Frame>(std::move(labels));
}

FramePtr standard_frame(int n, const std::string& prefix) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (int i = 1; i <= n; ++i) labels.push_back(prefix + std::to_string(i));
  return make_frame(std::move(labels));
}

FramePtr concat_frames(const Frame& a, const Frame& b) {
  std::vector<std::string> labels = a.labels();
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  return make_frame(std::move(labels));
}

void require_same_frame(const Frame& a, const Frame& b, const char* where) {
  if (a != b)
    throw Error("FrameMismatch", std::string(where) + ": '" + a.fingerprint() + "' vs '" +
                                     b.fingerprint() + "'");
}

} // namespace nrw
