#include "gspde/errors.hpp"
