#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "isokit/mesh_io.hpp"
#include "isokit/shapes.hpp"

using namespace isokit;
namespace fs = std::filesystem;

TEST_CASE("tetrahedron halfedge structure") {
  auto m = testutil::make_tetrahedron();
  CHECK(m.vertex_count() == 4);
  CHECK(m.face_count() == 4);
  CHECK(static_cast<int>(m.halfedges.size()) == 12);
  CHECK(m.edge_count() == 6);
  CHECK(m.euler_characteristic() == 2);
  CHECK(m.signed_volume() > 0.0);
  CHECK_NOTHROW(m.audit());
}

TEST_CASE("unit tetrahedron metrics") {
  auto m = testutil::make_tetrahedron();
  CHECK(m.mean_edge_length() == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cube bounding box diagonal") {
  auto m = testutil::make_cube();
  CHECK(m.bounding_box().diagonal() == Catch::Approx(std::sqrt(3.0)).epsilon(1e-12));
  CHECK(m.signed_volume() == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("icosahedron valence is five everywhere") {
  auto m = make_icosahedron();
  for (int v = 0; v < 12; ++v) CHECK(m.valence(v) == 5);
}

TEST_CASE("open boundary is rejected") {
  std::vector<Vec3> pts = {{0, 0, 0}, {1, 0, 0}, {0.5, 0.866, 0}, {0.5, 0.289, 0.816}};
  // Tetrahedron with one face missing.
  std::vector<std::array<int, 3>> tris = {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}};
  CHECK_THROWS_AS(HalfedgeMesh::build(pts, tris), TopologyError);
}

TEST_CASE("inconsistent orientation is rejected") {
  auto pts = testutil::make_tetrahedron().positions;
  std::vector<std::array<int, 3>> tris = {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {2, 3, 0}};
  // The last face is wound against its neighbors: duplicate directed edges.
  tris[3] = {0, 2, 3};  // should be {2, 0, 3}
  CHECK_THROWS_AS(HalfedgeMesh::build(pts, tris), TopologyError);
}

TEST_CASE("vertex normals") {
  SECTION("pyramid apex points along the axis") {
    auto m = testutil::make_square_pyramid();
    const Vec3 n = m.vertex_normal(0);
    CHECK(n.x() == Catch::Approx(0.0).margin(1e-14));
    CHECK(n.y() == Catch::Approx(0.0).margin(1e-14));
    CHECK(n.z() == Catch::Approx(1.0).epsilon(1e-12));
  }
  SECTION("planar fan vertex gets the plane normal") {
    auto m = testutil::make_square_pyramid();
    const Vec3 n = m.vertex_normal(5);  // flat base center
    CHECK(n.z() == Catch::Approx(-1.0).epsilon(1e-12));
  }
  SECTION("icosahedron vertex normals are radial") {
    auto m = make_icosahedron();
    for (int v = 0; v < 12; ++v) {
      const Vec3 n = m.vertex_normal(v);
      const Vec3 r = m.positions[v].normalized();
      CHECK(n.dot(r) == Catch::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("area-weighted normals of a closed mesh sum to zero") {
  auto meshes = {testutil::make_tetrahedron(), testutil::make_cube(), make_icosphere(2),
                 make_potato(2, 7)};
  for (const auto& m : meshes) {
    Vec3 sum = Vec3::Zero();
    for (int f = 0; f < static_cast<int>(m.face_capacity()); ++f)
      sum += m.face_normal_weighted(f);
    CHECK(sum.norm() <= 1e-9 * m.total_area());
  }
}

TEST_CASE("obj round trip") {
  auto m = testutil::make_tetrahedron();
  const auto path = testutil::temp_path("tetra.obj");
  save_mesh(m, path);
  auto back = load_mesh(path);
  REQUIRE(back.vertex_count() == 4);
  REQUIRE(back.face_count() == 4);
  for (int v = 0; v < 4; ++v)
    CHECK((back.positions[v] - m.positions[v]).norm() <=
          1e-6 * m.bounding_box().diagonal());
  CHECK_NOTHROW(back.audit());
}

TEST_CASE("binary stl layout and welding") {
  auto m = make_icosahedron();
  const auto path = testutil::temp_path("icosa.stl");
  save_mesh(m, path, MeshFormat::StlBinary);
  CHECK(fs::file_size(path) == 84 + 50 * 20);
  auto back = load_mesh(path);
  CHECK(back.vertex_count() == 12);  // duplicated facet vertices welded
  CHECK(back.face_count() == 20);
  CHECK(back.euler_characteristic() == 2);

  SECTION("byte-identical rewrite") {
    const auto path2 = testutil::temp_path("icosa2.stl");
    save_mesh(m, path2, MeshFormat::StlBinary);
    std::ifstream a(path, std::ios::binary), b(path2, std::ios::binary);
    std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
  }
}

TEST_CASE("ascii stl facet records") {
  auto m = testutil::make_cube();
  const auto path = testutil::temp_path("cube.stl");
  save_mesh(m, path, MeshFormat::StlAscii);
  std::ifstream in(path);
  int facets = 0;
  std::string word;
  while (in >> word)
    if (word == "facet") ++facets;
  CHECK(facets == 12);
  auto back = load_mesh(path);
  CHECK(back.vertex_count() == 8);
  CHECK(back.face_count() == 12);
}

TEST_CASE("ascii ply read") {
  const auto path = testutil::temp_path("tetra.ply");
  {
    auto m = testutil::make_tetrahedron();
    std::vector<Vec3> pts;
    std::vector<std::array<int, 3>> tris;
    m.to_indexed(pts, tris);
    std::ofstream out(path);
    out << "ply\nformat ascii 1.0\nelement vertex " << pts.size()
        << "\nproperty float x\nproperty float y\nproperty float z\nelement face "
        << tris.size() << "\nproperty list uchar int vertex_indices\nend_header\n";
    for (const auto& p : pts) out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
    for (const auto& t : tris) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  }
  auto m = load_mesh(path);
  CHECK(m.vertex_count() == 4);
  CHECK(m.face_count() == 4);
}

TEST_CASE("flip keeps the structure sound") {
  auto m = make_icosphere(1);
  const int before_v = m.vertex_count();
  int flipped = 0;
  for (int h : m.edge_halfedges()) {
    if (m.can_flip(h)) {
      m.flip(h);
      ++flipped;
      break;
    }
  }
  REQUIRE(flipped == 1);
  CHECK(m.vertex_count() == before_v);
  CHECK(m.euler_characteristic() == 2);
  CHECK_NOTHROW(m.audit());
}

TEST_CASE("collapse keeps the structure sound") {
  auto m = make_icosphere(1);
  const int v0 = m.vertex_count();
  const int f0 = m.face_count();
  int done = 0;
  for (int h : m.edge_halfedges()) {
    if (m.can_collapse(h)) {
      const int b = m.dest(h);
      const Vec3 mid = 0.5 * (m.positions[m.origin(h)] + m.positions[b]);
      m.collapse(h);
      m.positions[b] = mid;
      ++done;
      break;
    }
  }
  REQUIRE(done == 1);
  CHECK(m.vertex_count() == v0 - 1);
  CHECK(m.face_count() == f0 - 2);
  CHECK(m.euler_characteristic() == 2);
  CHECK_NOTHROW(m.audit());
  m.compact();
  CHECK_NOTHROW(m.audit());
  CHECK(m.is_compact());
}

TEST_CASE("icosphere counts") {
  auto m = make_icosphere(3);
  CHECK(m.vertex_count() == 642);
  CHECK(m.face_count() == 1280);
  CHECK(m.euler_characteristic() == 2);
}

TEST_CASE("slab helper is a valid closed mesh") {
  auto slab = testutil::make_slab(8);
  CHECK_NOTHROW(slab.mesh.audit());
  CHECK(slab.mesh.euler_characteristic() == 2);
  CHECK(slab.mesh.signed_volume() > 0.0);
  REQUIRE(slab.central_face >= 0);
  for (int v : slab.top_interior_vertices) CHECK(slab.mesh.valence(v) == 6);
}

TEST_CASE("degenerate face is rejected") {
  std::vector<Vec3> pts = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {0.5, 1, 0}};
  std::vector<std::array<int, 3>> tris = {{0, 1, 2}, {0, 2, 1}, {0, 1, 3}, {0, 3, 1}};
  CHECK_THROWS(HalfedgeMesh::build(pts, tris));
}
