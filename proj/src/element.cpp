#include "boussinesq/element.hpp"

namespace boussinesq::element {

namespace {

struct PointData {
    double weight;  // rule weight times area
    std::array<double, 4> phi;
    std::array<Eigen::Vector2d, 4> dphi;
};

// Shape data at the degree-8 points of one triangle.
class CellPoints {
public:
    explicit CellPoints(const TriangleGeometry& g) : rule_(quadrature_rule(kCellDegree))
    {
        for (std::size_t q = 0; q < rule_.size(); ++q) {
            data_[q] = {rule_.weights[q] * g.area, shape::values(rule_.points[q]),
                        shape::gradients(rule_.points[q], g)};
        }
    }

    std::size_t size() const { return rule_.size(); }
    const PointData& operator[](std::size_t q) const { return data_[q]; }

private:
    const QuadratureRule& rule_;
    std::array<PointData, 25> data_{};
};

Eigen::Vector2d velocity_at(const PointData& p, const Vec8& w)
{
    Eigen::Vector2d v = Eigen::Vector2d::Zero();
    for (int k = 0; k < 4; ++k) {
        v[0] += w[k] * p.phi[k];
        v[1] += w[4 + k] * p.phi[k];
    }
    return v;
}

// Row c is the gradient of component c.
Eigen::Matrix2d velocity_gradient_at(const PointData& p, const Vec8& w)
{
    Eigen::Matrix2d grad = Eigen::Matrix2d::Zero();
    for (int k = 0; k < 4; ++k) {
        grad.row(0) += w[k] * p.dphi[k].transpose();
        grad.row(1) += w[4 + k] * p.dphi[k].transpose();
    }
    return grad;
}

double p1_at(const PointData& p, const Vec3& v) { return v[0] * p.phi[0] + v[1] * p.phi[1] + v[2] * p.phi[2]; }

Eigen::Vector2d p1_gradient_at(const PointData& p, const Vec3& v)
{
    return v[0] * p.dphi[0] + v[1] * p.dphi[1] + v[2] * p.dphi[2];
}

Mat8 block_diagonal(const Mat4& block)
{
    Mat8 m = Mat8::Zero();
    m.topLeftCorner<4, 4>() = block;
    m.bottomRightCorner<4, 4>() = block;
    return m;
}

}  // namespace

Mat3 p1_mass(const TriangleGeometry& g)
{
    const CellPoints pts(g);
    Mat3 m = Mat3::Zero();
    for (std::size_t q = 0; q < pts.size(); ++q) {
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) m(i, j) += pts[q].weight * pts[q].phi[i] * pts[q].phi[j];
        }
    }
    return m;
}

Mat3 p1_stiffness(const TriangleGeometry& g)
{
    Mat3 m;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) m(i, j) = g.area * g.grad_lambda[i].dot(g.grad_lambda[j]);
    }
    return m;
}

Mat4 mini_mass(const TriangleGeometry& g)
{
    const CellPoints pts(g);
    Mat4 m = Mat4::Zero();
    for (std::size_t q = 0; q < pts.size(); ++q) {
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) m(i, j) += pts[q].weight * pts[q].phi[i] * pts[q].phi[j];
        }
    }
    return m;
}

Mat4 mini_stiffness(const TriangleGeometry& g)
{
    const CellPoints pts(g);
    Mat4 m = Mat4::Zero();
    for (std::size_t q = 0; q < pts.size(); ++q) {
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) m(i, j) += pts[q].weight * pts[q].dphi[i].dot(pts[q].dphi[j]);
        }
    }
    return m;
}

Mat8 velocity_mass(const TriangleGeometry& g) { return block_diagonal(mini_mass(g)); }
Mat8 velocity_stiffness(const TriangleGeometry& g) { return block_diagonal(mini_stiffness(g)); }

Mat38 divergence(const TriangleGeometry& g)
{
    const CellPoints pts(g);
    Mat38 m = Mat38::Zero();
    for (std::size_t q = 0; q < pts.size(); ++q) {
        const auto& p = pts[q];
        for (int i = 0; i < 3; ++i) {
            for (int c = 0; c < 2; ++c) {
                for (int k = 0; k < 4; ++k) m(i, 4 * c + k) -= p.weight * p.phi[i] * p.dphi[k][c];
            }
        }
    }
    return m;
}

Mat83 buoyancy(const TriangleGeometry& g, const Eigen::Vector2d& gravity)
{
    const CellPoints pts(g);
    Mat83 m = Mat83::Zero();
    for (std::size_t q = 0; q < pts.size(); ++q) {
        const auto& p = pts[q];
        for (int c = 0; c < 2; ++c) {
            for (int k = 0; k < 4; ++k) {
                for (int j = 0; j < 3; ++j) m(4 * c + k, j) += p.weight * gravity[c] * p.phi[k] * p.phi[j];
            }
        }
    }
    return m;
}

Mat8 velocity_convection(const TriangleGeometry& g, const Vec8& w)
{
    const CellPoints pts(g);
    Mat4 block = Mat4::Zero();
    for (std::size_t q = 0; q < pts.size(); ++q) {
        const auto& p = pts[q];
        const Eigen::Vector2d wq = velocity_at(p, w);
        std::array<double, 4> advect{};
        for (int k = 0; k < 4; ++k) advect[k] = wq.dot(p.dphi[k]);
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                block(i, j) += 0.5 * p.weight * (advect[j] * p.phi[i] - advect[i] * p.phi[j]);
            }
        }
    }
    return block_diagonal(block);
}

Mat3 scalar_convection(const TriangleGeometry& g, const Vec8& w)
{
    const CellPoints pts(g);
    Mat3 m = Mat3::Zero();
    for (std::size_t q = 0; q < pts.size(); ++q) {
        const auto& p = pts[q];
        const Eigen::Vector2d wq = velocity_at(p, w);
        std::array<double, 3> advect{};
        for (int k = 0; k < 3; ++k) advect[k] = wq.dot(p.dphi[k]);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                m(i, j) += 0.5 * p.weight * (advect[j] * p.phi[i] - advect[i] * p.phi[j]);
            }
        }
    }
    return m;
}

Vec8 velocity_first_slot(const TriangleGeometry& g, const Vec8& y, const Vec8& mu)
{
    const CellPoints pts(g);
    Vec8 v = Vec8::Zero();
    for (std::size_t q = 0; q < pts.size(); ++q) {
        const auto& p = pts[q];
        const Eigen::Vector2d yq = velocity_at(p, y);
        const Eigen::Vector2d mq = velocity_at(p, mu);
        // (phi e_c . grad) y . mu = phi * sum_d d_c y_d mu_d
        const Eigen::Vector2d a = velocity_gradient_at(p, y).transpose() * mq;
        const Eigen::Vector2d b = velocity_gradient_at(p, mu).transpose() * yq;
        for (int c = 0; c < 2; ++c) {
            for (int k = 0; k < 4; ++k) v[4 * c + k] += 0.5 * p.weight * p.phi[k] * (a[c] - b[c]);
        }
    }
    return v;
}

Vec8 scalar_first_slot(const TriangleGeometry& g, const Vec3& theta, const Vec3& kappa)
{
    const CellPoints pts(g);
    Vec8 v = Vec8::Zero();
    for (std::size_t q = 0; q < pts.size(); ++q) {
        const auto& p = pts[q];
        const Eigen::Vector2d a = p1_gradient_at(p, theta) * p1_at(p, kappa);
        const Eigen::Vector2d b = p1_gradient_at(p, kappa) * p1_at(p, theta);
        for (int c = 0; c < 2; ++c) {
            for (int k = 0; k < 4; ++k) v[4 * c + k] += 0.5 * p.weight * p.phi[k] * (a[c] - b[c]);
        }
    }
    return v;
}

Vec8 velocity_last_slot(const TriangleGeometry& g, const Vec8& w, const Vec8& y)
{
    const CellPoints pts(g);
    Vec8 v = Vec8::Zero();
    for (std::size_t q = 0; q < pts.size(); ++q) {
        const auto& p = pts[q];
        const Eigen::Vector2d wq = velocity_at(p, w);
        const Eigen::Vector2d yq = velocity_at(p, y);
        const Eigen::Vector2d advected = velocity_gradient_at(p, y) * wq;  // (w . grad) y
        for (int c = 0; c < 2; ++c) {
            for (int k = 0; k < 4; ++k) {
                v[4 * c + k] += 0.5 * p.weight * (advected[c] * p.phi[k] - wq.dot(p.dphi[k]) * yq[c]);
            }
        }
    }
    return v;
}

Vec3 scalar_last_slot(const TriangleGeometry& g, const Vec8& w, const Vec3& theta)
{
    const CellPoints pts(g);
    Vec3 v = Vec3::Zero();
    for (std::size_t q = 0; q < pts.size(); ++q) {
        const auto& p = pts[q];
        const Eigen::Vector2d wq = velocity_at(p, w);
        const double advected = wq.dot(p1_gradient_at(p, theta));
        const double tq = p1_at(p, theta);
        for (int k = 0; k < 3; ++k) v[k] += 0.5 * p.weight * (advected * p.phi[k] - wq.dot(p.dphi[k]) * tq);
    }
    return v;
}

Mat2 edge_mass(double length)
{
    const LineRule& line = gauss_legendre(kEdgePoints);
    Mat2 m = Mat2::Zero();
    for (std::size_t q = 0; q < line.points.size(); ++q) {
        const double s = line.points[q];
        const Eigen::Vector2d phi(1.0 - s, s);
        m += line.weights[q] * length * phi * phi.transpose();
    }
    return m;
}

}  // namespace boussinesq::element
