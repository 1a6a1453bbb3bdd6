#include "knotstrata/geometry.hpp"

// Header-only for now; this translation unit anchors the library target.
