int last_reading(const int *readings, size_t size)
{
    if (size == 0)
        return -1;
    return readings[size];
}
