#ifndef NRW_FRAME_HPP
#define NRW_FRAME_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace nrw {

/// Labeled orthonormal basis of the ambient metric vector space.
class Frame {
public:
  explicit Frame(std::vector<std::string> labels);

  int dim() const { return static_cast<int>(m_labels.size()); }
  const std::vector<std::string>& labels() const { return m_labels; }
  const std::string& label(int i) const;

  /// Index of a label, or -1 when absent.
  int index_of(const std::string& label) const;

  bool operator==(const Frame& other) const { return m_labels == other.m_labels; }
  bool operator!=(const Frame& other) const { return !(*this == other); }

  /// Stable identifier used in reports (labels joined by commas).
  std::string fingerprint() const;

private:
  std::vector<std::string> m_labels;
  std::map<std::string, int> m_index;
};

using FramePtr = std::shared_ptr<const Frame>;

/// Build a shared frame; throws LabelCollision on duplicate labels.
FramePtr make_frame(std::vector<std::string> labels);

/// Frame with labels e1..en.
FramePtr standard_frame(int n, const std::string& prefix = "e");

/// Concatenated frame a ++ b; throws LabelCollision on overlap.
FramePtr concat_frames(const Frame& a, const Frame& b);

/// Throws FrameMismatch unless both frames agree.
void require_same_frame(const Frame& a, const Frame& b, const char* where);

} // namespace nrw

#endif
