long checksum(const unsigned char *data, size_t n)
{
    long sum = 0;
    for (size_t i = 0; i <= n; i++)
        sum += data[i];
    return sum;
}
