#pragma once

// The catalog JSON is embedded at build time; the build puts gkforge_catalog_data.hpp on the include path.
#include <gkforge_catalog_data.hpp>

#include "gkforge/catalog/catalog.hpp"

namespace gkforge::catalog {

inline const Catalog& builtin()
{
    static const Catalog c = Catalog::parse(kEmbeddedCatalogJson);
    return c;
}

}  // namespace gkforge::catalog
