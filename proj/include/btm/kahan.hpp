#pragma once
// Compensated accumulation for long heavy-tailed sums (n up to 1e7 with
// summands spanning many orders of magnitude).

namespace btm {

class KahanSum {
  public:
    KahanSum() = default;
    explicit KahanSum(double init) : sum_(init) {}

    void add(double x) {
        double y = x - c_;
        double t = sum_ + y;
        c_ = (t - sum_) - y;
        sum_ = t;
    }
    KahanSum& operator+=(double x) {
        add(x);
        return *this;
    }
    double value() const { return sum_; }

  private:
    double sum_ = 0.0;
    double c_ = 0.0;
};

}  // namespace btm
