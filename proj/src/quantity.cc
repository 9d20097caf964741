#include "radar/quantity.h"

#include <cctype>
#include <limits>
#include <stdexcept>

using namespace std;

namespace radar {
using std::to_string;

namespace {
long long parse_digits(string_view digits, string_view whole) {
    if (digits.empty())
        throw invalid_argument("malformed number: " + string(whole));
    long long value = 0;
    for (char c : digits) {
        if (!isdigit(static_cast<unsigned char>(c)))
            throw invalid_argument("malformed number: " + string(whole));
        if (value > (numeric_limits<long long>::max() - 9) / 10)
            throw invalid_argument("number out of range: " + string(whole));
        value = value * 10 + (c - '0');
    }
    return value;
}
}

Quantity parse_quantity(string_view text) {
    string_view body = text;
    bool negative = false;
    if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
        negative = body[0] == '-';
        body.remove_prefix(1);
    }
    Quantity result;
    if (size_t slash = body.find('/'); slash != string_view::npos) {
        long long den = parse_digits(body.substr(slash + 1), text);
        if (den == 0)
            throw invalid_argument("zero denominator: " + string(text));
        result = Quantity(parse_digits(body.substr(0, slash), text), den);
    } else if (size_t dot = body.find('.'); dot != string_view::npos) {
        string_view whole = body.substr(0, dot);
        string_view frac = body.substr(dot + 1);
        if (frac.size() > 15 || (whole.empty() && frac.empty()))
            throw invalid_argument("malformed number: " + string(text));
        long long scale = 1;
        for (size_t i = 0; i < frac.size(); ++i)
            scale *= 10;
        long long int_part = whole.empty() ? 0 : parse_digits(whole, text);
        long long frac_part = frac.empty() ? 0 : parse_digits(frac, text);
        result = Quantity(int_part) + Quantity(frac_part, scale);
    } else {
        result = Quantity(parse_digits(body, text));
    }
    return negative ? -result : result;
}

string format_quantity(const Quantity &q) {
    if (q.denominator() == 1)
        return to_string(q.numerator());
    return to_string(q.numerator()) + "/" + to_string(q.denominator());
}
}
