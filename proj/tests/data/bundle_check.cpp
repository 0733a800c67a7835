// Loads a bundle and prints a JSON summary for the interop test.

#include <iostream>

#include <json.hpp>

#include "zsl/bundle.hpp"
#include "zsl/errors.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: bundle_check <bundle-dir>\n";
        return 2;
    }
    try {
        const zsl::Bundle b = zsl::load_bundle(argv[1]);
        nlohmann::json out;
        out["features_shape"] = {b.dataset.features.rows(), b.dataset.features.cols()};
        out["attributes_shape"] = {b.attributes.values.rows(), b.attributes.values.cols()};
        out["features_sum"] = b.dataset.features.sum();
        out["features_first_row"] = std::vector<double>(b.dataset.features.row(0).begin(), b.dataset.features.row(0).end());
        out["attributes_sum"] = b.attributes.values.sum();
        out["labels"] = b.dataset.labels;
        out["num_seen"] = b.attributes.num_seen;
        out["num_unseen"] = b.attributes.num_unseen;
        out["test_unseen"] = b.dataset.splits.test_unseen;
        std::cout << out.dump() << '\n';
    } catch (const zsl::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(e.code());
    }
    return 0;
}
